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

#ifndef LEAKLAB_CRYPTO_HPP
#define LEAKLAB_CRYPTO_HPP

#include <array>
#include <cstdint>

#include "leaklab/bytes.hpp"

namespace leaklab::crypto {

std::array<uint8_t, 32> sha256(BytesView data);

Bytes hmac_sha256(BytesView key, BytesView data);

// RFC 5869 extract-then-expand.
Bytes hkdf_sha256(BytesView ikm, BytesView salt, BytesView info, size_t out_len);

// AES-256-GCM. seal returns ciphertext || 16-byte tag; open verifies and
// strips it, throwing Error on failure.
Bytes aes256_gcm_seal(BytesView key, BytesView nonce12, BytesView plaintext);
Bytes aes256_gcm_open(BytesView key, BytesView nonce12, BytesView sealed);

// AES-256-CTR keystream applied to data (encrypt == decrypt).
Bytes aes256_ctr(BytesView key, BytesView iv16, BytesView data);

}  // namespace leaklab::crypto

#endif  // LEAKLAB_CRYPTO_HPP
