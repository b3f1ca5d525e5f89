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

#include "leaklab/attachment_store.hpp"

#include <algorithm>
#include <sstream>

#include "leaklab/crypto.hpp"
#include "leaklab/errors.hpp"

namespace leaklab {

size_t attachment_ct_len(size_t content_len) { return content_len + 16; }

size_t filename_ct_len(size_t filename_len) {
  return 16 * (filename_len / 16 + 1);
}

ReceiveResult AttachmentStore::receive(const Attachment& attachment, Rng& rng) {
  if (attachment.filename.empty() || attachment.filename.size() > 255)
    throw FilenameTooLong("filename of " +
                          std::to_string(attachment.filename.size()) + " bytes");

  auto hash = crypto::sha256(attachment.content);
  if (dedup_enabled_) {
    for (Entry& e : live_) {
      if (e.content_hash == hash) {
        e.refs++;
        return ReceiveResult::Deduplicated;
      }
    }
  }

  Entry e;
  e.content_hash = hash;
  e.pair.opaque_id = rng.next();
  e.pair.att_ct_len = attachment_ct_len(attachment.content.size());
  e.pair.fname_ct_len = filename_ct_len(attachment.filename.size());
  live_.push_back(e);
  return ReceiveResult::Stored;
}

bool AttachmentStore::unsend(BytesView content) {
  auto hash = crypto::sha256(content);
  for (auto lit = live_.begin(); lit != live_.end(); ++lit) {
    if (lit->content_hash == hash) {
      if (--lit->refs == 0) live_.erase(lit);
      return true;
    }
  }
  return false;
}

std::vector<AttachmentCiphertextPair> AttachmentStore::backup_view(Rng& rng) {
  std::vector<AttachmentCiphertextPair> old_pairs;
  std::vector<AttachmentCiphertextPair> new_pairs;
  for (Entry& e : live_) {
    (e.in_previous_view ? old_pairs : new_pairs).push_back(e.pair);
    e.in_previous_view = true;
  }
  rng.shuffle(new_pairs);
  old_pairs.insert(old_pairs.end(), new_pairs.begin(), new_pairs.end());
  return old_pairs;
}

std::string AttachmentStore::view_json(
    const std::vector<AttachmentCiphertextPair>& view) const {
  std::ostringstream os;
  for (const auto& p : view)
    os << "{\"id\":" << p.opaque_id << ",\"att_ct_len\":" << p.att_ct_len
       << ",\"fname_ct_len\":" << p.fname_ct_len << "}\n";
  return os.str();
}

}  // namespace leaklab
