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

#ifndef LEAKLAB_WHATSAPP_BACKUP_HPP
#define LEAKLAB_WHATSAPP_BACKUP_HPP

#include <array>
#include <cstdint>

#include "leaklab/bytes.hpp"
#include "leaklab/client.hpp"
#include "leaklab/rng.hpp"

namespace leaklab {

// Monolithic pipeline: serialize -> DEFLATE (zlib container, level 1) ->
// AES-256-GCM. The adversary only ever sees the total ciphertext length.
// Wire layout (see docs/format-whatsapp-backup.md):
//   magic "LWB" || version byte || epoch (BE32) || nonce (12) || GCM(body)
// The version byte carries the compression flag so a backup is
// self-describing for the test-side opener.
struct WhatsAppBackupConfig {
  bool compression_enabled = true;
  int compression_level = 1;
  size_t window_bytes = 32768;
  size_t min_match = 4;
  size_t header_len = 8;

  size_t aead_overhead() const { return header_len + 12 + 16; }
};

using Key256 = std::array<uint8_t, 32>;

struct WhatsAppBackup {
  Bytes wire;
  uint32_t epoch = 0;

  size_t ciphertext_len() const { return wire.size(); }
};

Bytes deflate_bytes(BytesView in, int level);
Bytes inflate_bytes(BytesView in);

// Compress-and-encrypt a serialized database image.
WhatsAppBackup whatsapp_seal_image(BytesView image,
                                   const WhatsAppBackupConfig& config,
                                   const Key256& key, uint32_t epoch, Rng& rng);

WhatsAppBackup whatsapp_make_backup(const Client& client,
                                    const WhatsAppBackupConfig& config,
                                    const Key256& key, uint32_t epoch,
                                    Rng& rng);

// Decrypt-then-decompress; recovers the exact serialized image.
Bytes whatsapp_open_backup(BytesView wire, const WhatsAppBackupConfig& config,
                           const Key256& key);

inline size_t adversary_observe(const WhatsAppBackup& backup) {
  return backup.ciphertext_len();
}

}  // namespace leaklab

#endif  // LEAKLAB_WHATSAPP_BACKUP_HPP
