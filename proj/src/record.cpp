// Copyright 2026 The Leaklab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "leaklab/record.hpp"

#include <cstring>

#include "leaklab/errors.hpp"
#include "leaklab/varint.hpp"

namespace leaklab {

namespace {

size_t int_body_len(int64_t v) {
  if (v == 0 || v == 1) return 0;
  if (v >= -128 && v <= 127) return 1;
  if (v >= -32768 && v <= 32767) return 2;
  if (v >= -8388608 && v <= 8388607) return 3;
  if (v >= -2147483648LL && v <= 2147483647LL) return 4;
  if (v >= -140737488355328LL && v <= 140737488355327LL) return 6;
  return 8;
}

uint64_t int_serial_type(int64_t v) {
  if (v == 0) return 8;
  if (v == 1) return 9;
  switch (int_body_len(v)) {
    case 1: return 1;
    case 2: return 2;
    case 3: return 3;
    case 4: return 4;
    case 6: return 5;
    default: return 6;
  }
}

void encode_int_body(Bytes& out, int64_t v, size_t len) {
  uint64_t u = static_cast<uint64_t>(v);
  for (size_t i = 0; i < len; ++i)
    out.push_back(static_cast<uint8_t>(u >> (8 * (len - 1 - i))));
}

int64_t decode_int_body(BytesView in, size_t& pos, size_t len) {
  if (pos + len > in.size()) throw Error("record: truncated integer body");
  uint64_t u = 0;
  for (size_t i = 0; i < len; ++i) u = (u << 8) | in[pos++];
  // Sign-extend from the top byte.
  if (len < 8 && (u & (1ULL << (8 * len - 1))))
    u |= ~((1ULL << (8 * len)) - 1);
  return static_cast<int64_t>(u);
}

}  // namespace

uint64_t serial_type(const Value& v) {
  struct Visitor {
    uint64_t operator()(const Null&) const { return 0; }
    uint64_t operator()(int64_t i) const { return int_serial_type(i); }
    uint64_t operator()(double) const { return 7; }
    uint64_t operator()(const std::string& s) const { return 2 * s.size() + 13; }
    uint64_t operator()(const Bytes& b) const { return 2 * b.size() + 12; }
  };
  return std::visit(Visitor{}, v);
}

size_t serial_body_len(uint64_t code) {
  switch (code) {
    case 0: case 8: case 9: return 0;
    case 1: return 1;
    case 2: return 2;
    case 3: return 3;
    case 4: return 4;
    case 5: return 6;
    case 6: case 7: return 8;
    default:
      return (code - (code % 2 == 0 ? 12 : 13)) / 2;
  }
}

Bytes Record::encode() const {
  Bytes type_codes;
  for (const auto& v : columns_) encode_varint(type_codes, serial_type(v));

  // The header-size varint counts itself; sizes 1..127 need one byte, and a
  // fixpoint settles the rare case where adding the varint pushes it wider.
  size_t header_size = type_codes.size() + 1;
  while (varint_len(header_size) + type_codes.size() != header_size)
    header_size = varint_len(header_size) + type_codes.size();

  Bytes out;
  encode_varint(out, header_size);
  append(out, type_codes);

  for (const auto& v : columns_) {
    if (std::holds_alternative<int64_t>(v)) {
      int64_t i = std::get<int64_t>(v);
      encode_int_body(out, i, int_body_len(i));
    } else if (std::holds_alternative<double>(v)) {
      double d = std::get<double>(v);
      uint64_t u;
      std::memcpy(&u, &d, 8);
      put_be64(out, u);
    } else if (std::holds_alternative<std::string>(v)) {
      append(out, std::string_view(std::get<std::string>(v)));
    } else if (std::holds_alternative<Bytes>(v)) {
      append(out, BytesView(std::get<Bytes>(v)));
    }
  }
  return out;
}

size_t Record::encoded_size() const {
  size_t codes = 0, bodies = 0;
  for (const auto& v : columns_) {
    uint64_t code = serial_type(v);
    codes += varint_len(code);
    bodies += serial_body_len(code);
  }
  size_t header_size = codes + 1;
  while (varint_len(header_size) + codes != header_size)
    header_size = varint_len(header_size) + codes;
  return header_size + bodies;
}

Record Record::decode(BytesView payload) {
  size_t pos = 0;
  uint64_t header_size = decode_varint(payload, pos);
  if (header_size > payload.size()) throw Error("record: bad header size");

  std::vector<uint64_t> codes;
  while (pos < header_size) codes.push_back(decode_varint(payload, pos));
  if (pos != header_size) throw Error("record: header overrun");

  Record rec;
  for (uint64_t code : codes) {
    switch (code) {
      case 0: rec.add(Null{}); break;
      case 8: rec.add(int64_t{0}); break;
      case 9: rec.add(int64_t{1}); break;
      case 7: {
        if (pos + 8 > payload.size()) throw Error("record: truncated float");
        uint64_t u = get_be64(payload.data() + pos);
        pos += 8;
        double d;
        std::memcpy(&d, &u, 8);
        rec.add(d);
        break;
      }
      case 1: case 2: case 3: case 4: case 5: case 6: {
        size_t len = serial_body_len(code);
        rec.add(decode_int_body(payload, pos, len));
        break;
      }
      default: {
        size_t len = serial_body_len(code);
        if (pos + len > payload.size()) throw Error("record: truncated body");
        if (code % 2 == 1) {
          rec.add(std::string(payload.begin() + pos, payload.begin() + pos + len));
        } else {
          rec.add(Bytes(payload.begin() + pos, payload.begin() + pos + len));
        }
        pos += len;
        break;
      }
    }
  }
  if (pos != payload.size()) throw Error("record: trailing bytes");
  return rec;
}

}  // namespace leaklab
