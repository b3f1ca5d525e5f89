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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "leaklab/attacks.hpp"
#include "leaklab/errors.hpp"

namespace leaklab::attacks {

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kSuccess: return "Success";
    case Outcome::kWrongAnswer: return "WrongAnswer";
    case Outcome::kDetectedFailure: return "DetectedFailure";
  }
  return "?";
}

void AttackTranscript::enforce() const {
  if (message_bound && messages_sent > message_bound)
    throw Error("attack exceeded message bound: " +
                std::to_string(messages_sent) + " > " +
                std::to_string(message_bound));
  if (backup_bound && backups_seen > backup_bound)
    throw Error("attack exceeded backup bound: " +
                std::to_string(backups_seen) + " > " +
                std::to_string(backup_bound));
}

std::vector<size_t> dedup_class_lengths() {
  std::vector<size_t> lengths;
  for (size_t len = 1; len <= 255; len += 16) lengths.push_back(len);
  return lengths;
}

int64_t dedup_message_count(int64_t n) {
  if (n <= 1) return n;
  int64_t total = 0;
  while (n > 1) {
    total += n;
    n = (n + 15) / 16;
  }
  return total;
}

namespace {

int backups_bound_for(size_t n) {
  return std::max<int>(1, static_cast<int>(
      std::ceil(std::log(static_cast<double>(n)) / std::log(16.0))));
}

std::set<uint64_t> pair_ids(const std::vector<AttachmentCiphertextPair>& pairs) {
  std::set<uint64_t> ids;
  for (const auto& p : pairs) ids.insert(p.opaque_id);
  return ids;
}

}  // namespace

AttackTranscript dedup_attack(BackupOracle& oracle,
                              const DedupDictionary& dictionary,
                              const DedupParams& params, Rng& rng) {
  if (dictionary.candidates.empty())
    throw Error("dedup attack: empty dictionary");
  size_t size = dictionary.content_size();
  for (const auto& c : dictionary.candidates)
    if (c.size() != size)
      throw Error("dedup attack: candidates must share a content size");

  AttackTranscript t;
  t.message_bound = static_cast<int>(
      dedup_message_count(static_cast<int64_t>(dictionary.candidates.size())));
  t.backup_bound = backups_bound_for(dictionary.candidates.size());

  const auto class_lengths = dedup_class_lengths();
  std::vector<size_t> active(dictionary.candidates.size());
  for (size_t i = 0; i < active.size(); ++i) active[i] = i;

  auto previous = pair_ids(oracle.baseline().whatsapp->attachment_pairs);

  int fname_counter = 0;
  while (true) {
    // Partition the active candidates into 16 filename classes; the first
    // (n mod 16) classes take the extra candidate.
    size_t n = active.size();
    size_t per = n / 16, extra = n % 16;
    std::vector<std::vector<size_t>> classes(16);
    size_t pos = 0;
    for (size_t c = 0; c < 16 && pos < n; ++c) {
      size_t take = per + (c < extra ? 1 : 0);
      for (size_t k = 0; k < take && pos < n; ++k)
        classes[c].push_back(active[pos++]);
    }

    std::vector<Bytes> sent_contents;
    for (size_t c = 0; c < 16; ++c) {
      for (size_t idx : classes[c]) {
        InboundMessage msg;
        msg.sender = "adv";
        msg.kind = MessageKind::kAttachment;
        Attachment a;
        a.content = dictionary.candidates[idx];
        std::string name = std::to_string(fname_counter++);
        while (name.size() < class_lengths[c]) name.push_back('x');
        name.resize(class_lengths[c]);
        a.filename = to_bytes(name);
        msg.attachment = a;
        oracle.inject(msg);
        sent_contents.push_back(dictionary.candidates[idx]);
        t.messages_sent++;
      }
    }

    auto obs = oracle.next_backup();
    t.backups_seen++;
    const auto& pairs = obs.whatsapp->attachment_pairs;

    // New pairs of the candidate size, bucketed by filename-ciphertext class.
    std::map<size_t, size_t> observed;
    for (const auto& p : pairs) {
      if (previous.count(p.opaque_id)) continue;
      if (p.att_ct_len != attachment_ct_len(size)) continue;
      observed[p.fname_ct_len]++;
    }
    previous = pair_ids(pairs);

    int deficit_class = -1;
    for (size_t c = 0; c < 16; ++c) {
      if (classes[c].empty()) continue;
      size_t got = observed.count(filename_ct_len(class_lengths[c]))
                       ? observed[filename_ct_len(class_lengths[c])]
                       : 0;
      if (got + 1 == classes[c].size()) {
        deficit_class = static_cast<int>(c);
        break;
      }
    }
    t.log("round " + std::to_string(t.backups_seen) + ": sent " +
          std::to_string(sent_contents.size()) + ", deficit class " +
          std::to_string(deficit_class));

    if (deficit_class < 0) {
      if (params.expect_present || t.backups_seen > 1) {
        t.fail("NoiseCollision: no missing filename class although "
               "deduplication was expected");
      } else {
        t.answer = "absent";
      }
      t.enforce();
      return t;
    }

    // Unsend this round's attachments so the next round deduplicates only
    // against the original copy.
    std::vector<size_t>& hits = classes[deficit_class];
    if (hits.size() == 1) {
      t.answer = "candidate:" + std::to_string(hits[0]);
      t.enforce();
      return t;
    }
    for (const auto& content : sent_contents) {
      InboundMessage msg;
      msg.sender = "adv";
      msg.kind = MessageKind::kUnsend;
      msg.attachment = Attachment{content, to_bytes(std::string("x")), "adv"};
      oracle.inject(msg);
    }
    active = hits;
    rng.next();  // keep per-round draw alignment for reproducibility
  }
}

}  // namespace leaklab::attacks
