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

#ifndef LEAKLAB_ATTACKS_HPP
#define LEAKLAB_ATTACKS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leaklab/bytes.hpp"
#include "leaklab/oracle.hpp"
#include "leaklab/rng.hpp"

namespace leaklab::attacks {

enum class Outcome { kSuccess, kWrongAnswer, kDetectedFailure };

std::string outcome_name(Outcome o);

struct AttackTranscript {
  int messages_sent = 0;
  int backups_seen = 0;
  std::string answer;
  Outcome outcome = Outcome::kSuccess;
  std::string failure_reason;
  std::vector<std::string> round_log;

  // Stated cost bounds for this attack instance; enforce() throws if the
  // attack ran past them.
  int message_bound = 0;
  int backup_bound = 0;
  void enforce() const;

  void log(std::string line) { round_log.push_back(std::move(line)); }
  void fail(std::string reason) {
    outcome = Outcome::kDetectedFailure;
    failure_reason = std::move(reason);
  }
};

// ---------------------------------------------------------------------------
// Deduplication file-recovery attack.

struct DedupDictionary {
  std::vector<Bytes> candidates;  // all the same content size
  size_t content_size() const { return candidates.empty() ? 0 : candidates[0].size(); }
};

// Filename class lengths {1, 17, ..., 241}: sixteen distinct padded-ciphertext
// buckets under the 255-byte filename cap.
std::vector<size_t> dedup_class_lengths();

// Total candidate messages sent when recovering from n candidates:
// sum over rounds i of ceil(n / 16^(i-1)).
int64_t dedup_message_count(int64_t n);

struct DedupParams {
  bool expect_present = false;  // raise NoiseCollision instead of "absent"
};

AttackTranscript dedup_attack(BackupOracle& oracle,
                              const DedupDictionary& dictionary,
                              const DedupParams& params, Rng& rng);

// ---------------------------------------------------------------------------
// Compression attacks.

struct StringDictionary {
  std::vector<std::string> candidates;
  bool uniform_length() const;
  size_t max_length() const;
};

enum class ZlibStrategy { kBruteForce, kBinary };

constexpr size_t kEpsilonMax = 18;
constexpr size_t kZlibWindow = 32768;

enum class ConstraintVerdict { kOk, kWindowOverflow };

// Window feasibility: brute force needs (|v|+eps_max)*|V| < 32768, binary
// search halving needs (|v|+eps_max)*|V| < 16384.
ConstraintVerdict check_constraints(size_t v_len, size_t dict_size,
                                    ZlibStrategy strategy);

struct SubstringParams {
  size_t len = 0;      // 0 = auto
  size_t overlap = 0;
  bool enabled = true;
};

AttackTranscript zlib_bruteforce(BackupOracle& oracle,
                                 const StringDictionary& dictionary, Rng& rng);

AttackTranscript zlib_binary(BackupOracle& oracle,
                             const StringDictionary& dictionary,
                             const SubstringParams& params, Rng& rng);

// ---------------------------------------------------------------------------
// Keyword-search-index distinguishing attack.

struct FtsParams {
  // Assumed number of complete level-0 merge cycles in the victim's past;
  // docid and segdir rowid bases follow from it. Desk scenarios use 0.
  int prior_epoch = 0;
  PageConfig page;
  size_t observe_overhead = 36;  // non-page bytes of an uncompressed backup
};

// Distinguishes which of v0, v1 the victim received. Requires the
// uncompressed pipeline and a quiet device. Candidate byte lengths must be
// equal; the feasible range under the single-root-node model is roughly
// [40, 1850] and is validated during planning.
AttackTranscript fts_attack(BackupOracle& oracle, const std::string& v0,
                            const std::string& v1, const FtsParams& params,
                            Rng& rng);

// Single-backup confirmation for the known-initial-state setup: the target
// "<prefix> <secret>" is the only message, the guess fills the same prefix.
// Computes the two possible free-space values and sends one discriminating
// message sized between them.
struct FtsSimpleOutcome {
  bool matched = false;
  size_t n_match = 0;     // free space if the guess matched
  size_t n_mismatch = 0;  // free space if it did not
};
FtsSimpleOutcome fts_simple_confirm(BackupOracle& oracle,
                                    const std::string& prefix,
                                    const std::string& target_word,
                                    const std::string& guess_word,
                                    const FtsParams& params);

// ---------------------------------------------------------------------------
// Frame-sequence attacks on the signal-style pipeline.

struct SignalQuietResult {
  size_t contacts = 0;
  size_t threads = 0;
  size_t messages = 0;
  std::vector<uint32_t> contact_frames;
  std::vector<uint32_t> thread_frames;
  std::vector<uint32_t> message_frames;
};

// Counts rows (and per-row frame lengths) of the first three tables by
// diffing the frame-length sequences around one injected message from a
// fresh sender. Retries with a different length on a detected collision.
AttackTranscript signal_quiet_attack(BackupOracle& oracle, Rng& rng,
                                     SignalQuietResult* result = nullptr);

struct SignalThresholdResult {
  size_t threads_end = 0;   // frame index of the last threads row
  size_t messages_end = 0;  // frame index of the last messages row
};

// One maximum-size injection; the two frames above the cap-derived
// threshold mark the ends of the threads and messages blocks.
AttackTranscript signal_threshold_attack(BackupOracle& oracle, Rng& rng,
                                         SignalThresholdResult* result = nullptr);

struct SignalRandomParams {
  int m = 4;  // number of random-length injections
};

// Failure bound nu * (1/r)^m from the frame-length model.
double signal_random_failure_bound(int nu, int m,
                                   const FrameLengthModel& fm = {});

AttackTranscript signal_noisy_random_attack(BackupOracle& oracle,
                                            const SignalRandomParams& params,
                                            Rng& rng,
                                            SignalThresholdResult* result = nullptr);

}  // namespace leaklab::attacks

#endif  // LEAKLAB_ATTACKS_HPP
