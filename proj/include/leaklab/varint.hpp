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

#ifndef LEAKLAB_VARINT_HPP
#define LEAKLAB_VARINT_HPP

#include <cstdint>
#include <cstddef>

#include "leaklab/bytes.hpp"

namespace leaklab {

// Variable-length integers: 1..9 bytes, 7 payload bits per byte in big-endian
// groups, high bit set on every byte except the last. The 9-byte form carries
// a full 8 bits in its final byte, so the whole uint64 range is representable.

size_t varint_len(uint64_t value);

// Appends the minimal encoding of `value` to `out`; returns encoded length.
size_t encode_varint(Bytes& out, uint64_t value);

Bytes encode_varint(uint64_t value);

// Decodes one varint at `in[pos]`, advancing `pos`. Throws Error on a
// truncated buffer.
uint64_t decode_varint(BytesView in, size_t& pos);

}  // namespace leaklab

#endif  // LEAKLAB_VARINT_HPP
