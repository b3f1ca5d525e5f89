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

#include "leaklab/noise.hpp"

namespace leaklab {

namespace {

enum Action {
  kSendMessage,
  kReceiveMessage,
  kSendImage,
  kReceiveImage,
  kCall,
  kReceiveCall,
  kCreateGroup,
  kDeleteMessage,
  kDeleteGroup,
};

constexpr int kWeights[] = {15, 15, 15, 15, 10, 10, 10, 5, 5};

Action draw_action(Rng& rng) {
  int roll = static_cast<int>(rng.below(100));
  int acc = 0;
  for (int i = 0; i < 9; ++i) {
    acc += kWeights[i];
    if (roll < acc) return static_cast<Action>(i);
  }
  return kDeleteGroup;
}

std::string noise_peer(Rng& rng) {
  return "peer" + std::to_string(rng.below(6));
}

Attachment make_attachment(Rng& rng, size_t size, size_t fname_len) {
  Attachment a;
  a.content = rng.bytes(size);
  a.filename = to_bytes(rng.alnum(fname_len));
  return a;
}

}  // namespace

NoiseStats apply_noise_interval(Client& client, const NoiseSpec& spec,
                                Rng& rng, int64_t& clock) {
  NoiseStats stats;

  for (int i = 0; i < spec.texts_per_round; ++i) {
    client.receive(InboundMessage::text(
        noise_peer(rng), rng.alnum(1 + rng.below(spec.max_text_len)), ++clock));
    stats.actions++;
  }
  int attachments = spec.attachments_per_round + (spec.collide_size ? 1 : 0);
  for (int i = 0; i < attachments; ++i) {
    bool collider = spec.collide_size && i == 0;
    size_t size = collider                 ? spec.collide_size
                  : spec.attachment_size   ? spec.attachment_size
                                           : static_cast<size_t>(rng.range(
                                               static_cast<int64_t>(spec.media_min),
                                               static_cast<int64_t>(spec.media_max)));
    size_t fname = collider                    ? spec.collide_fname_len
                   : spec.attachment_fname_len ? spec.attachment_fname_len
                                               : static_cast<size_t>(rng.range(5, 60));
    InboundMessage msg;
    msg.sender = noise_peer(rng);
    msg.timestamp = ++clock;
    msg.kind = MessageKind::kAttachment;
    msg.attachment = make_attachment(rng, size, fname);
    client.receive(msg);
    stats.actions++;
  }

  if (!spec.weighted) return stats;
  for (int i = 0; i < spec.actions_per_interval; ++i) {
    for (;;) {
      Action a = draw_action(rng);
      InboundMessage msg;
      msg.timestamp = ++clock;
      switch (a) {
        case kSendMessage:
        case kReceiveMessage:
        case kCall:
        case kReceiveCall: {
          // Outgoing traffic and call events land in the same tables, with
          // the sender name marking the direction.
          std::string peer = noise_peer(rng);
          msg.sender = (a == kSendMessage || a == kCall) ? "self:" + peer : peer;
          size_t len = (a == kCall || a == kReceiveCall)
                           ? 8
                           : 1 + rng.below(spec.max_text_len);
          msg.body = rng.alnum(len);
          client.receive(msg);
          break;
        }
        case kSendImage:
        case kReceiveImage: {
          std::string peer = noise_peer(rng);
          msg.sender = a == kSendImage ? "self:" + peer : peer;
          msg.kind = MessageKind::kAttachment;
          msg.attachment = make_attachment(
              rng,
              static_cast<size_t>(rng.range(
                  static_cast<int64_t>(spec.media_min),
                  static_cast<int64_t>(spec.media_max))),
              static_cast<size_t>(rng.range(5, 60)));
          client.receive(msg);
          break;
        }
        case kCreateGroup: {
          msg.sender = "group" + std::to_string(rng.below(1000));
          msg.body = "created group " + rng.alnum(8);
          client.receive(msg);
          break;
        }
        case kDeleteMessage: {
          auto rowids = client.db().table("messages").rowids();
          if (rowids.empty()) {
            stats.resampled++;
            continue;
          }
          msg.kind = MessageKind::kDeleteMessage;
          msg.delete_rowid =
              rowids[rng.below(rowids.size())];
          msg.sender = "self";
          client.receive(msg);
          break;
        }
        case kDeleteGroup: {
          const std::string threads_table =
              client.config().profile == Profile::kSignal ? "threads"
                                                          : "message_threads";
          auto rowids = client.db().table(threads_table).rowids();
          if (rowids.empty()) {
            stats.resampled++;
            continue;
          }
          client.db().table(threads_table).erase(
              rowids[rng.below(rowids.size())]);
          break;
        }
      }
      stats.actions++;
      break;
    }
  }
  return stats;
}

}  // namespace leaklab
