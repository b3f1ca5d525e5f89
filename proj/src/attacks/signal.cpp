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

namespace {

// One token per wire element: frame lengths as-is, media regions as the
// negated region size so unchanged gaps compare equal across backups.
using Seq = std::vector<int64_t>;

Seq observe_seq(const BackupObservation& obs) {
  const Bytes& wire = obs.signal->wire;
  auto frames = parse_frames_resync(wire);
  Seq seq;
  size_t last_end = 0;
  for (const auto& f : frames) {
    if (f.after_gap && !seq.empty())
      seq.push_back(-static_cast<int64_t>(f.offset - last_end));
    seq.push_back(f.length);
    last_end = f.offset + 4 + f.length;
  }
  if (last_end < wire.size())
    seq.push_back(-static_cast<int64_t>(wire.size() - last_end));
  return seq;
}

// All index triples i<j<k such that removing them from `after` yields
// `before` exactly.
std::vector<std::array<size_t, 3>> insertion_triples(const Seq& after,
                                                     const Seq& before) {
  std::vector<std::array<size_t, 3>> found;
  if (after.size() != before.size() + 3) return found;
  size_t n = after.size();
  for (size_t i = 0; i < n; ++i) {
    if (i > 0 && !std::equal(after.begin(), after.begin() + i, before.begin()))
      break;  // prefix already diverged; larger i cannot match
    if (!std::equal(after.begin(), after.begin() + i, before.begin())) continue;
    for (size_t j = i + 1; j < n; ++j) {
      if (!std::equal(after.begin() + i + 1, after.begin() + j,
                      before.begin() + i))
        break;
      for (size_t k = j + 1; k < n; ++k) {
        if (!std::equal(after.begin() + j + 1, after.begin() + k,
                        before.begin() + j - 1))
          break;
        if (std::equal(after.begin() + k + 1, after.end(),
                       before.begin() + k - 2))
          found.push_back({i, j, k});
      }
    }
  }
  return found;
}

size_t count_rows(const Seq& seq, size_t from, size_t to_inclusive) {
  // Rows in a block: frames minus the media-header frame preceding each gap.
  size_t rows = 0;
  for (size_t p = from; p <= to_inclusive && p < seq.size(); ++p) {
    if (seq[p] >= 0) rows++;
    if (seq[p] < 0) rows--;  // drop the media header counted just before
  }
  return rows;
}

}  // namespace

AttackTranscript signal_quiet_attack(BackupOracle& oracle, Rng& rng,
                                     SignalQuietResult* result) {
  AttackTranscript t;
  t.backup_bound = 3;  // one per attempt; clean runs use exactly one
  t.message_bound = 3;

  Seq base;
  try {
    base = observe_seq(oracle.baseline());
  } catch (const BoundaryLost& e) {
    t.fail(std::string("BoundaryLost: ") + e.what());
    return t;
  }

  const size_t creates = create_frame_count(Profile::kSignal);
  for (int attempt = 0; attempt < 3; ++attempt) {
    // A fresh sender adds one row to each of the first three tables. The
    // body length moves the threads/messages frames away from lengths
    // already present in the sequence.
    size_t lambda = 0;
    for (size_t probe = 120 + 97 * attempt; probe < 1900; probe += 61) {
      bool clear = true;
      for (int64_t v : base)
        if (v >= static_cast<int64_t>(probe + 447) &&
            v <= static_cast<int64_t>(probe + 465))
          clear = false;
      if (clear) {
        lambda = probe;
        break;
      }
    }
    if (lambda == 0) lambda = 120 + 97 * attempt;

    oracle.inject(InboundMessage::text(
        "fresh-sender-" + std::to_string(attempt), rng.alnum(lambda)));
    t.messages_sent++;

    Seq after;
    try {
      after = observe_seq(oracle.next_backup());
      t.backups_seen++;
    } catch (const BoundaryLost& e) {
      t.fail(std::string("BoundaryLost: ") + e.what());
      return t;
    }

    auto triples = insertion_triples(after, base);
    if (triples.size() != 1) {
      t.log("attempt " + std::to_string(attempt) + ": LengthCollision (" +
            std::to_string(triples.size()) + " alignments)");
      base = after;  // the injected rows are now part of the baseline
      continue;
    }

    auto [i, j, k] = triples[0];
    SignalQuietResult res;
    res.contacts = i - creates + 1;
    res.threads = count_rows(after, i + 1, j);
    res.messages = count_rows(after, j + 1, k);
    for (size_t p = creates; p <= i; ++p)
      res.contact_frames.push_back(static_cast<uint32_t>(after[p]));
    for (size_t p = i + 1; p <= j; ++p)
      if (after[p] >= 0)
        res.thread_frames.push_back(static_cast<uint32_t>(after[p]));
    for (size_t p = j + 1; p <= k; ++p)
      if (after[p] >= 0)
        res.message_frames.push_back(static_cast<uint32_t>(after[p]));
    if (result) *result = res;
    t.answer = "contacts:" + std::to_string(res.contacts) +
               " threads:" + std::to_string(res.threads) +
               " messages:" + std::to_string(res.messages);
    t.enforce();
    return t;
  }
  t.fail("LengthCollision: no unambiguous alignment in 3 attempts");
  return t;
}

AttackTranscript signal_threshold_attack(BackupOracle& oracle, Rng& rng,
                                         SignalThresholdResult* result) {
  AttackTranscript t;
  t.message_bound = 1;
  t.backup_bound = 1;

  FrameLengthModel fm;
  oracle.inject(
      InboundMessage::text("adv-big", rng.alnum(fm.row_cap)));
  t.messages_sent++;

  Seq seq;
  try {
    seq = observe_seq(oracle.next_backup());
    t.backups_seen++;
  } catch (const BoundaryLost& e) {
    t.fail(std::string("BoundaryLost: ") + e.what());
    return t;
  }

  // Frames of a capped row sit at row_cap + delta >= row_cap + delta_min;
  // noise at or under 1900 bytes stays below that.
  const int64_t threshold = static_cast<int64_t>(fm.row_cap + fm.delta_min);
  std::vector<size_t> over;
  size_t frame_index = 0;
  std::vector<size_t> frame_positions;
  for (int64_t v : seq) {
    if (v >= 0) {
      if (v >= threshold) over.push_back(frame_index);
      frame_index++;
    }
  }
  (void)frame_positions;

  if (over.size() != 2) {
    t.fail("ThresholdAmbiguity: " + std::to_string(over.size()) +
           " frames above threshold");
    return t;
  }
  if (result) *result = SignalThresholdResult{over[0], over[1]};
  t.answer = "threads_end:" + std::to_string(over[0]) +
             " messages_end:" + std::to_string(over[1]);
  t.enforce();
  return t;
}

double signal_random_failure_bound(int nu, int m, const FrameLengthModel& fm) {
  double r = std::floor(static_cast<double>(fm.row_cap) /
                        static_cast<double>(fm.delta_max - fm.delta_min + 1));
  return static_cast<double>(nu) * std::pow(1.0 / r, m);
}

AttackTranscript signal_noisy_random_attack(BackupOracle& oracle,
                                            const SignalRandomParams& params,
                                            Rng& rng,
                                            SignalThresholdResult* result) {
  AttackTranscript t;
  t.message_bound = params.m;
  t.backup_bound = 1;

  FrameLengthModel fm;
  const size_t width = fm.delta_max - fm.delta_min + 1;
  const size_t r = fm.row_cap / width;

  std::vector<size_t> lambdas;
  for (int i = 0; i < params.m; ++i) {
    size_t x = 1 + rng.below(r);
    lambdas.push_back(x * width);
  }
  for (size_t lambda : lambdas) {
    oracle.inject(InboundMessage::text(
        "adv-rand-" + std::to_string(t.messages_sent), rng.alnum(lambda)));
    t.messages_sent++;
  }

  Seq seq;
  try {
    seq = observe_seq(oracle.next_backup());
    t.backups_seen++;
  } catch (const BoundaryLost& e) {
    t.fail(std::string("BoundaryLost: ") + e.what());
    return t;
  }

  std::vector<int64_t> frames;
  for (int64_t v : seq)
    if (v >= 0) frames.push_back(v);

  std::vector<size_t> runs;
  for (size_t p = 0; p + lambdas.size() <= frames.size(); ++p) {
    bool match = true;
    for (size_t i = 0; i < lambdas.size() && match; ++i) {
      int64_t lo = static_cast<int64_t>(lambdas[i] + fm.delta_min);
      int64_t hi = static_cast<int64_t>(lambdas[i] + fm.delta_max);
      match = frames[p + i] >= lo && frames[p + i] <= hi;
    }
    if (match) runs.push_back(p);
  }

  if (runs.size() < 2) {
    t.fail("PatternNotFound: " + std::to_string(runs.size()) + " runs");
    return t;
  }
  if (runs.size() > 2) {
    t.fail("PatternAmbiguous: " + std::to_string(runs.size()) + " runs");
    return t;
  }
  size_t m = lambdas.size();
  if (result)
    *result = SignalThresholdResult{runs[0] + m - 1, runs[1] + m - 1};
  t.answer = "threads_end:" + std::to_string(runs[0] + m - 1) +
             " messages_end:" + std::to_string(runs[1] + m - 1);
  t.enforce();
  return t;
}

}  // namespace leaklab::attacks
