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

#ifndef LEAKLAB_ATTACHMENT_STORE_HPP
#define LEAKLAB_ATTACHMENT_STORE_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "leaklab/bytes.hpp"
#include "leaklab/rng.hpp"

namespace leaklab {

struct Attachment {
  Bytes content;
  Bytes filename;  // 1..255 bytes
  std::string sender;
};

// What the adversary sees per stored attachment: only ciphertext lengths and
// an opaque id that stays stable across backups. Attachment bytes gain a
// 16-byte tag; filenames are padded to the next full 16-byte block.
struct AttachmentCiphertextPair {
  uint64_t opaque_id = 0;
  size_t att_ct_len = 0;
  size_t fname_ct_len = 0;

  bool operator==(const AttachmentCiphertextPair&) const = default;
};

size_t attachment_ct_len(size_t content_len);
size_t filename_ct_len(size_t filename_len);

enum class ReceiveResult { Stored, Deduplicated };

class AttachmentStore {
 public:
  // When dedup is off every attachment is stored, which is the mitigation
  // toggle the kill-switch tests exercise.
  explicit AttachmentStore(bool dedup_enabled = true)
      : dedup_enabled_(dedup_enabled) {}

  // Content is deduplicated by SHA-256 across senders. A deduplicated
  // receive adds a reference to the existing pair. Throws FilenameTooLong
  // outside 1..255 bytes.
  ReceiveResult receive(const Attachment& attachment, Rng& rng);

  // Drops one reference to this content; the pair leaves subsequent backup
  // views once no references remain. Returns false if absent.
  bool unsend(BytesView content);

  // All live pairs; those stored since the previous view come last, in an
  // order shuffled uniformly by `rng`. Old pairs keep their positions.
  std::vector<AttachmentCiphertextPair> backup_view(Rng& rng);

  std::string view_json(const std::vector<AttachmentCiphertextPair>& view) const;

  size_t live_count() const { return live_.size(); }

 private:
  using Hash = std::array<uint8_t, 32>;
  struct Entry {
    Hash content_hash;
    AttachmentCiphertextPair pair;
    int refs = 1;
    bool in_previous_view = false;
  };

  bool dedup_enabled_;
  std::vector<Entry> live_;  // in store order
};

}  // namespace leaklab

#endif  // LEAKLAB_ATTACHMENT_STORE_HPP
