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

#ifndef LEAKLAB_CLIENT_HPP
#define LEAKLAB_CLIENT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leaklab/attachment_store.hpp"
#include "leaklab/fts_index.hpp"
#include "leaklab/paged_db.hpp"
#include "leaklab/rng.hpp"

namespace leaklab {

enum class Profile { kWhatsApp, kSignal };

enum class MessageKind { kText, kAttachment, kUnsend, kDeleteMessage };

struct InboundMessage {
  std::string sender;
  std::string body;
  int64_t timestamp = 0;
  MessageKind kind = MessageKind::kText;
  std::optional<Attachment> attachment;  // kAttachment / kUnsend content
  int64_t delete_rowid = 0;              // kDeleteMessage target

  static InboundMessage text(std::string sender, std::string body,
                             int64_t ts = 0) {
    return InboundMessage{std::move(sender), std::move(body), ts,
                          MessageKind::kText, std::nullopt, 0};
  }
};

struct StateDelta {
  int rows_inserted = 0;
  int rows_replaced = 0;
  MergeReport merges;
  std::optional<ReceiveResult> attachment_result;
  int64_t docid = 0;
};

// Per-row wire metadata for the frame-oriented backup: the plaintext length
// of the row's insert statement and a seed that pins its filler bytes, plus
// the media payload length when the row carries one.
struct FrameMeta {
  size_t pt_len = 0;
  uint64_t fill_seed = 0;
  size_t media_len = 0;
};

struct ClientConfig {
  Profile profile = Profile::kWhatsApp;
  bool dedup_enabled = true;
  bool auto_download = true;  // attachments enter the store on receipt
  int fts_merge_factor = 16;
  PageConfig page;
};

// Frame length model constants for the signal-style pipeline: a message body
// of lambda bytes (capped at row_cap) yields an insert frame of
// lambda + delta on the wire, with delta uniform on [delta_min, delta_max].
// delta absorbs the per-frame MAC, so insert plaintexts are sized
// lambda + delta - mac_len.
struct FrameLengthModel {
  size_t delta_min = 447;
  size_t delta_max = 465;
  size_t row_cap = 2000;
  size_t mac_len = 10;
};

class Client {
 public:
  Client(ClientConfig config, uint64_t seed);

  StateDelta receive(const InboundMessage& msg);

  // Metadata overhead draw for one message, uniform on [8, 18] bytes.
  static size_t sample_epsilon(Rng& rng);

  const Database& db() const { return db_; }
  Database& db() { return db_; }
  const FtsIndex& index() const { return *index_; }
  AttachmentStore& attachments() { return attachments_; }
  const ClientConfig& config() const { return config_; }
  const FrameLengthModel& frame_model() const { return frame_model_; }
  int64_t docid_counter() const { return docid_counter_; }
  Rng& rng() { return rng_; }

  const std::map<std::pair<std::string, int64_t>, FrameMeta>& frames() const {
    return frames_;
  }

  // Ground truth helpers for verification in tests and reports.
  size_t table_rows(const std::string& name) const {
    return db_.table(name).row_count();
  }

 private:
  StateDelta receive_whatsapp(const InboundMessage& msg);
  StateDelta receive_signal(const InboundMessage& msg);
  Bytes epsilon_meta(int64_t timestamp, const std::string& sender);
  void set_frame(const std::string& table, int64_t rowid, size_t pt_len,
                 size_t media_len = 0);

  ClientConfig config_;
  Rng rng_;
  Database db_;
  std::optional<FtsIndex> index_;
  AttachmentStore attachments_;
  int64_t docid_counter_ = 0;
  std::map<std::string, int64_t> contact_rows_;  // sender -> contacts rowid
  std::map<std::string, int64_t> thread_rows_;   // sender -> threads rowid
  std::map<std::pair<std::string, int64_t>, FrameMeta> frames_;
  FrameLengthModel frame_model_;
};

// Reduced schemas. Table creation order fixes both the page order of the
// serialized image and the insert-frame block order of the signal pipeline.
inline const std::vector<std::string>& whatsapp_tables() {
  static const std::vector<std::string> kTables = {
      "messages", "message_threads", "fts_segdir", "fts_extra"};
  return kTables;
}

inline const std::vector<std::string>& signal_tables() {
  static const std::vector<std::string> kTables = {"contacts", "threads",
                                                   "messages",
                                                   "attachments_meta"};
  return kTables;
}

}  // namespace leaklab

#endif  // LEAKLAB_CLIENT_HPP
