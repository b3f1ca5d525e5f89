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

#include "leaklab/varint.hpp"

#include "leaklab/errors.hpp"

namespace leaklab {

size_t varint_len(uint64_t value) {
  if (value <= 0x7f) return 1;
  if (value <= 0x3fff) return 2;
  if (value <= 0x1fffff) return 3;
  if (value <= 0xfffffff) return 4;
  if (value <= 0x7ffffffffULL) return 5;
  if (value <= 0x3ffffffffffULL) return 6;
  if (value <= 0x1ffffffffffffULL) return 7;
  if (value <= 0xffffffffffffffULL) return 8;
  return 9;
}

size_t encode_varint(Bytes& out, uint64_t value) {
  size_t n = varint_len(value);
  if (n == 9) {
    // 8 continuation bytes of 7 bits, then a full 8-bit final byte.
    for (int shift = 57; shift >= 8; shift -= 7)
      out.push_back(0x80 | ((value >> shift) & 0x7f));
    out.push_back(static_cast<uint8_t>(value & 0xff));
    return n;
  }
  for (size_t i = 0; i < n; ++i) {
    unsigned shift = 7 * (n - 1 - i);
    uint8_t b = (value >> shift) & 0x7f;
    if (i + 1 < n) b |= 0x80;
    out.push_back(b);
  }
  return n;
}

Bytes encode_varint(uint64_t value) {
  Bytes out;
  encode_varint(out, value);
  return out;
}

uint64_t decode_varint(BytesView in, size_t& pos) {
  uint64_t v = 0;
  for (size_t i = 0; i < 8; ++i) {
    if (pos >= in.size()) throw Error("varint: truncated input");
    uint8_t b = in[pos++];
    v = (v << 7) | (b & 0x7f);
    if ((b & 0x80) == 0) return v;
  }
  if (pos >= in.size()) throw Error("varint: truncated input");
  return (v << 8) | in[pos++];
}

}  // namespace leaklab
