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

#include "leaklab/client.hpp"

#include "leaklab/errors.hpp"

namespace leaklab {

Client::Client(ClientConfig config, uint64_t seed)
    : config_(config), rng_(seed), db_(config.page),
      attachments_(config.dedup_enabled) {
  const auto& tables = config_.profile == Profile::kWhatsApp
                           ? whatsapp_tables()
                           : signal_tables();
  for (const auto& name : tables) db_.create_table(name);
  if (config_.profile == Profile::kWhatsApp)
    index_.emplace(&db_, "fts_segdir", config_.fts_merge_factor);
}

size_t Client::sample_epsilon(Rng& rng) {
  return static_cast<size_t>(rng.range(8, 18));
}

Bytes Client::epsilon_meta(int64_t timestamp, const std::string& sender) {
  size_t eps = sample_epsilon(rng_);
  Bytes meta;
  for (int shift = 40; shift >= 0; shift -= 8)
    meta.push_back(static_cast<uint8_t>(timestamp >> shift));
  uint64_t sid = 0;
  for (char c : sender) sid = sid * 131 + static_cast<unsigned char>(c);
  meta.push_back(static_cast<uint8_t>(sid >> 8));
  meta.push_back(static_cast<uint8_t>(sid));
  Bytes pad = rng_.bytes(eps - 8);
  append(meta, BytesView(pad));
  return meta;
}

void Client::set_frame(const std::string& table, int64_t rowid, size_t pt_len,
                       size_t media_len) {
  frames_[{table, rowid}] = FrameMeta{pt_len, rng_.next(), media_len};
}

StateDelta Client::receive(const InboundMessage& msg) {
  return config_.profile == Profile::kWhatsApp ? receive_whatsapp(msg)
                                               : receive_signal(msg);
}

StateDelta Client::receive_whatsapp(const InboundMessage& msg) {
  StateDelta delta;
  switch (msg.kind) {
    case MessageKind::kText: {
      Record row;
      row.add(msg.body).add(epsilon_meta(msg.timestamp, msg.sender));
      Placement p = db_.table("messages").insert(row);
      docid_counter_ = p.rowid;
      delta.docid = p.rowid;
      delta.rows_inserted++;
      delta.merges = index_->insert(p.rowid, tokenize(msg.body));
      break;
    }
    case MessageKind::kAttachment: {
      // Attachment rows are not tokenized; only the filename and metadata
      // land in the messages table.
      Record row;
      row.add(to_string(msg.attachment->filename))
         .add(epsilon_meta(msg.timestamp, msg.sender));
      Placement p = db_.table("messages").insert(row);
      docid_counter_ = p.rowid;
      delta.docid = p.rowid;
      delta.rows_inserted++;
      delta.merges = index_->insert(p.rowid, {});
      if (config_.auto_download)
        delta.attachment_result = attachments_.receive(*msg.attachment, rng_);
      break;
    }
    case MessageKind::kUnsend: {
      attachments_.unsend(msg.attachment->content);
      return delta;
    }
    case MessageKind::kDeleteMessage: {
      db_.table("messages").erase(msg.delete_rowid);
      return delta;
    }
  }

  // Thread bookkeeping row: fixed width so replacement never moves bytes.
  auto make_thread_row = [&] {
    Bytes key(8), val(12);
    uint64_t sid = 0;
    for (char c : msg.sender) sid = sid * 131 + static_cast<unsigned char>(c);
    for (int i = 0; i < 8; ++i) key[i] = static_cast<uint8_t>(sid >> (56 - 8 * i));
    for (int i = 0; i < 8; ++i)
      val[i] = static_cast<uint8_t>(uint64_t(docid_counter_) >> (56 - 8 * i));
    for (int i = 0; i < 4; ++i)
      val[8 + i] = static_cast<uint8_t>(uint64_t(msg.timestamp) >> (24 - 8 * i));
    return Record().add(key).add(val);
  };
  auto it = thread_rows_.find(msg.sender);
  if (it == thread_rows_.end()) {
    Placement p = db_.table("message_threads").insert(make_thread_row());
    thread_rows_[msg.sender] = p.rowid;
    delta.rows_inserted++;
  } else {
    db_.table("message_threads").overwrite_in_place(it->second, make_thread_row());
    delta.rows_replaced++;
  }
  return delta;
}

StateDelta Client::receive_signal(const InboundMessage& msg) {
  StateDelta delta;
  const FrameLengthModel& fm = frame_model_;

  if (msg.kind == MessageKind::kUnsend) {
    attachments_.unsend(msg.attachment->content);
    return delta;
  }
  if (msg.kind == MessageKind::kDeleteMessage) {
    db_.table("messages").erase(msg.delete_rowid);
    frames_.erase({"messages", msg.delete_rowid});
    return delta;
  }

  // First contact from this sender adds a contacts row whose statement
  // length comes from a bounded draw (always at or under the row cap).
  if (!contact_rows_.count(msg.sender)) {
    Record row;
    row.add(msg.sender).add(epsilon_meta(msg.timestamp, msg.sender));
    Placement p = db_.table("contacts").insert(row);
    contact_rows_[msg.sender] = p.rowid;
    set_frame("contacts", p.rowid,
              static_cast<size_t>(rng_.range(120, 400)) - fm.mac_len);
    delta.rows_inserted++;
  }

  std::string stored = msg.body.substr(0, fm.row_cap);
  size_t lambda = stored.size();
  auto delta_draw = [&] {
    return static_cast<size_t>(
        rng_.range(static_cast<int64_t>(fm.delta_min),
                   static_cast<int64_t>(fm.delta_max)));
  };

  // Threads holds the last message per chat; a replacement keeps the rowid
  // so the row's position in the frame order is stable.
  auto make_thread_record = [&] {
    return Record().add(stored).add(epsilon_meta(msg.timestamp, msg.sender));
  };
  auto tit = thread_rows_.find(msg.sender);
  if (tit == thread_rows_.end()) {
    Placement p = db_.table("threads").insert(make_thread_record());
    thread_rows_[msg.sender] = p.rowid;
    set_frame("threads", p.rowid, lambda + delta_draw() - fm.mac_len);
    delta.rows_inserted++;
  } else {
    db_.table("threads").erase(tit->second);
    db_.table("threads").insert_with_rowid(tit->second, make_thread_record());
    set_frame("threads", tit->second, lambda + delta_draw() - fm.mac_len);
    delta.rows_replaced++;
  }

  Record mrow;
  mrow.add(stored).add(epsilon_meta(msg.timestamp, msg.sender));
  Placement mp = db_.table("messages").insert(mrow);
  docid_counter_ = mp.rowid;
  delta.docid = mp.rowid;
  delta.rows_inserted++;
  size_t media_len = 0;
  if (msg.kind == MessageKind::kAttachment) {
    media_len = msg.attachment->content.size();
    if (config_.auto_download)
      delta.attachment_result = attachments_.receive(*msg.attachment, rng_);
  }
  set_frame("messages", mp.rowid, lambda + delta_draw() - fm.mac_len, media_len);

  // Overlong text spills into the attachment metadata table; media-bearing
  // messages get a metadata row as well.
  if (msg.body.size() > fm.row_cap || msg.kind == MessageKind::kAttachment) {
    Record arow;
    arow.add(int64_t(mp.rowid))
        .add(int64_t(msg.kind == MessageKind::kAttachment
                         ? media_len
                         : msg.body.size() - fm.row_cap));
    Placement ap = db_.table("attachments_meta").insert(arow);
    set_frame("attachments_meta", ap.rowid,
              static_cast<size_t>(rng_.range(80, 200)) - fm.mac_len);
    delta.rows_inserted++;
  }
  return delta;
}

}  // namespace leaklab
