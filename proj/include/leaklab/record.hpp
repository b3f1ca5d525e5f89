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

#ifndef LEAKLAB_RECORD_HPP
#define LEAKLAB_RECORD_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "leaklab/bytes.hpp"

namespace leaklab {

struct Null {};

// One typed column value: integer | float | text (UTF-8) | blob | null.
using Value = std::variant<Null, int64_t, double, std::string, Bytes>;

// A row in record format: a header of per-column serial-type codes (each a
// varint, preceded by a varint of the total header size) followed by the
// encoded column bodies. Integers use the smallest width that holds them,
// text codes are 2*len+13 and blob codes 2*len+12, so encoded sizes track
// the real on-disk behavior byte for byte.
class Record {
 public:
  Record() = default;
  explicit Record(std::vector<Value> columns) : columns_(std::move(columns)) {}

  Record& add(Value v) {
    columns_.push_back(std::move(v));
    return *this;
  }

  const std::vector<Value>& columns() const { return columns_; }

  Bytes encode() const;
  size_t encoded_size() const;

  static Record decode(BytesView payload);

 private:
  std::vector<Value> columns_;
};

// Serial-type code and body length for a single value.
uint64_t serial_type(const Value& v);
size_t serial_body_len(uint64_t code);

}  // namespace leaklab

#endif  // LEAKLAB_RECORD_HPP
