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

#ifndef LEAKLAB_HARNESS_HPP
#define LEAKLAB_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "leaklab/attacks.hpp"
#include "leaklab/client.hpp"
#include "leaklab/noise.hpp"
#include "leaklab/oracle.hpp"

namespace leaklab::harness {

// A fully seeded experiment: victim profile and pipeline, noise, the attack
// and its inputs, trial count. The same scenario always yields the same
// report.
struct Scenario {
  std::string name = "scenario";
  ClientConfig client;
  OracleConfig oracle;
  NoiseSpec noise;

  std::string attack;  // dedup | zlib-bf | zlib-bin | fts | fts-simple |
                       // signal-quiet | signal-threshold | signal-random

  int dict_size = 2;
  size_t v_len = 28;
  std::string corpus;            // "", "ssn", "ccn", "password"
  size_t attachment_size = 600;  // dedup candidate content size
  bool plant_target = true;
  bool substring_opt = true;     // zlib-bin optimization
  int fts_prior_level0 = 0;      // n
  int fts_prior_level1 = 0;      // pre-existing level-1 segments
  int prior_actions = 0;         // weighted noise actions before the attack
  int prior_texts = 0;           // short prior texts before the attack
  int signal_m = 4;              // random-length injection count
  int noise_frames = 0;          // nu for signal-random

  int trials = 200;
  uint64_t seed = 1;
};

struct TrialOutcome {
  attacks::Outcome outcome = attacks::Outcome::kSuccess;
  std::string answer;
  std::string failure_reason;
  int messages_sent = 0;
  int backups_seen = 0;
};

struct Report {
  std::string scenario_name;
  std::string attack;
  int trials = 0;
  int successes = 0;
  int detected_failures = 0;
  int wrong_answers = 0;
  int max_messages = 0;
  int max_backups = 0;
  std::vector<TrialOutcome> per_trial;

  double rate() const {
    return trials == 0 ? 0.0 : 100.0 * successes / trials;
  }
  // Binomial standard deviation of the success percentage.
  double sigma() const;

  std::string to_json() const;
};

Report run_trials(const Scenario& scenario);

// Trial counts honor the LAB_TRIALS environment override.
int effective_trials(int configured);

// --- paper-figure reproduction ----------------------------------------------

struct GridCell {
  int dict_size = 0;
  std::string column;  // "4".."28" or corpus name
  double rate = 0;
  double reference = 0;
  bool in_band = false;
};

struct GridReport {
  std::string table;     // "main" or "corpus"
  std::string strategy;  // "bf" or "bin"
  std::vector<GridCell> cells;
  bool bands_ok = true;
  bool trends_ok = true;
  std::vector<std::string> violations;

  bool ok() const { return bands_ok && trends_ok; }
  std::string to_json() const;
  std::string to_csv() const;
};

// Success-rate grid over |V| in {2,4,8,16} x |v| in {4,12,20,28} for one
// injection strategy, checked against the reference percentages with a
// +/-15 point band, monotone trend along |v| (5-point sampling slack), and
// an above-chance requirement for |v| >= 20.
GridReport reproduce_main_grid(const std::string& strategy, int trials,
                               uint64_t seed);

// SSN / CCN / password recovery grid, brute-force strategy.
GridReport reproduce_corpus_grid(int trials, uint64_t seed);

// Reference percentages (calibration targets for the reproduction grids).
double reference_rate_main(const std::string& strategy, int dict_size,
                           size_t v_len);
double reference_rate_corpus(const std::string& corpus, int dict_size);

// --- scenario scripts ---------------------------------------------------

// Replays a JSON-lines script ({"t":..,"actor":..,"action":..,"args":{..}})
// into a fresh client. The first line configures {"profile":.., "seed":..}.
Client client_from_script(const std::string& path);

// JSON (de)serialization for lab scenarios.
Scenario scenario_from_json(const std::string& json_text);
std::string scenario_to_json(const Scenario& scenario);

}  // namespace leaklab::harness

#endif  // LEAKLAB_HARNESS_HPP
