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

#include "leaklab/crypto.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <memory>

#include "leaklab/errors.hpp"

namespace leaklab::crypto {

namespace {

struct CipherCtxFree {
  void operator()(EVP_CIPHER_CTX* ctx) const { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxFree>;

CipherCtx make_ctx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw Error("crypto: ctx alloc failed");
  return ctx;
}

}  // namespace

std::array<uint8_t, 32> sha256(BytesView data) {
  std::array<uint8_t, 32> out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Bytes hmac_sha256(BytesView key, BytesView data) {
  Bytes out(32);
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(),
       data.size(), out.data(), &len);
  out.resize(len);
  return out;
}

Bytes hkdf_sha256(BytesView ikm, BytesView salt, BytesView info,
                  size_t out_len) {
  Bytes prk = hmac_sha256(salt, ikm);
  Bytes out;
  Bytes block;
  uint8_t counter = 1;
  while (out.size() < out_len) {
    Bytes input = block;
    append(input, info);
    input.push_back(counter++);
    block = hmac_sha256(prk, input);
    append(out, block);
  }
  out.resize(out_len);
  return out;
}

Bytes aes256_gcm_seal(BytesView key, BytesView nonce12, BytesView plaintext) {
  if (key.size() != 32 || nonce12.size() != 12)
    throw Error("gcm: bad key/nonce size");
  auto ctx = make_ctx();
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                         nonce12.data()) != 1)
    throw Error("gcm: init failed");
  Bytes out(plaintext.size() + 16);
  int len = 0;
  if (!plaintext.empty() &&
      EVP_EncryptUpdate(ctx.get(), out.data(), &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1)
    throw Error("gcm: update failed");
  int total = len;
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + total, &len) != 1)
    throw Error("gcm: final failed");
  total += len;
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, 16,
                          out.data() + total) != 1)
    throw Error("gcm: tag failed");
  out.resize(total + 16);
  return out;
}

Bytes aes256_gcm_open(BytesView key, BytesView nonce12, BytesView sealed) {
  if (sealed.size() < 16) throw Error("gcm: input shorter than tag");
  auto ctx = make_ctx();
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(),
                         nonce12.data()) != 1)
    throw Error("gcm: init failed");
  size_t ct_len = sealed.size() - 16;
  Bytes out(ct_len);
  int len = 0;
  if (ct_len > 0 &&
      EVP_DecryptUpdate(ctx.get(), out.data(), &len, sealed.data(),
                        static_cast<int>(ct_len)) != 1)
    throw Error("gcm: update failed");
  int total = len;
  Bytes tag(sealed.begin() + ct_len, sealed.end());
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, 16, tag.data()) != 1)
    throw Error("gcm: set tag failed");
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + total, &len) != 1)
    throw Error("gcm: authentication failed");
  out.resize(total + len);
  return out;
}

Bytes aes256_ctr(BytesView key, BytesView iv16, BytesView data) {
  if (key.size() != 32 || iv16.size() != 16)
    throw Error("ctr: bad key/iv size");
  auto ctx = make_ctx();
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_ctr(), nullptr, key.data(),
                         iv16.data()) != 1)
    throw Error("ctr: init failed");
  Bytes out(data.size());
  int len = 0;
  if (!data.empty() &&
      EVP_EncryptUpdate(ctx.get(), out.data(), &len, data.data(),
                        static_cast<int>(data.size())) != 1)
    throw Error("ctr: update failed");
  int total = len;
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + total, &len) != 1)
    throw Error("ctr: final failed");
  out.resize(total + len);
  return out;
}

}  // namespace leaklab::crypto
