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

#ifndef LEAKLAB_DATASETS_HPP
#define LEAKLAB_DATASETS_HPP

#include <string>
#include <vector>

#include "leaklab/rng.hpp"

namespace leaklab::datasets {

// Restricted-corpus samplers for the recovery experiments.

// Nine digits under the issuance rules: area not 000/666/9xx, group not 00,
// serial not 0000.
std::string sample_ssn(Rng& rng);

// Sixteen digits with a Visa or Mastercard prefix and a valid Luhn check
// digit.
std::string sample_ccn(Rng& rng);
bool luhn_valid(const std::string& digits);

// Common-password-shaped strings from a fixed word list with the usual
// suffix habits.
std::string sample_password(Rng& rng);

// n distinct samples of the named corpus ("ssn", "ccn", "password").
std::vector<std::string> corpus_dictionary(const std::string& corpus, size_t n,
                                           Rng& rng);

}  // namespace leaklab::datasets

#endif  // LEAKLAB_DATASETS_HPP
