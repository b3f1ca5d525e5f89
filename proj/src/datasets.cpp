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

#include "leaklab/datasets.hpp"

#include <set>

#include "leaklab/errors.hpp"

namespace leaklab::datasets {

std::string sample_ssn(Rng& rng) {
  int area;
  do {
    area = static_cast<int>(rng.range(1, 899));
  } while (area == 666);
  int group = static_cast<int>(rng.range(1, 99));
  int serial = static_cast<int>(rng.range(1, 9999));
  char buf[10];
  snprintf(buf, sizeof buf, "%03d%02d%04d", area, group, serial);
  return buf;
}

bool luhn_valid(const std::string& digits) {
  int sum = 0;
  bool dbl = false;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    int d = *it - '0';
    if (dbl) {
      d *= 2;
      if (d > 9) d -= 9;
    }
    sum += d;
    dbl = !dbl;
  }
  return sum % 10 == 0;
}

std::string sample_ccn(Rng& rng) {
  std::string num;
  if (rng.chance(0.5)) {
    num = "4";  // Visa
  } else {
    num = "5";
    num.push_back(static_cast<char>('1' + rng.below(5)));  // Mastercard 51-55
  }
  while (num.size() < 15) num.push_back(static_cast<char>('0' + rng.below(10)));
  // Luhn check digit.
  num.push_back('0');
  for (char d = '0'; d <= '9'; ++d) {
    num.back() = d;
    if (luhn_valid(num)) break;
  }
  return num;
}

namespace {

const char* kWords[] = {
    "password", "dragon",  "monkey",  "shadow",  "master",  "qwerty",
    "letmein",  "sunshine", "princess", "football", "welcome", "flower",
    "charlie",  "jordan",  "freedom", "ginger",  "summer",  "ashley",
    "buster",   "pepper",  "hunter",  "soccer",  "harley",  "ranger",
    "daniel",   "hannah",  "thomas",  "tigger",  "robert",  "batman",
    "killer",   "andrew",  "purple",  "silver",  "orange",  "banana",
    "cookie",   "diamond", "falcon",  "jasper",  "maggie",  "melissa",
    "michael",  "mustang", "nicole",  "pandora", "peanut",  "phoenix",
    "rachel",   "raiders", "rocket",  "samsung", "scooter", "smokey",
    "sparky",   "spider",  "startrek", "taylor", "tucker",  "victor",
};

}  // namespace

std::string sample_password(Rng& rng) {
  std::string base = kWords[rng.below(std::size(kWords))];
  switch (rng.below(6)) {
    case 0: return base;
    case 1: return base + std::to_string(rng.below(100));
    case 2: return base + std::to_string(1970 + rng.below(55));
    case 3: return base + "123";
    case 4: return base + "!";
    default: {
      base[0] = static_cast<char>(base[0] - 'a' + 'A');
      return base + std::to_string(rng.below(10));
    }
  }
}

std::vector<std::string> corpus_dictionary(const std::string& corpus, size_t n,
                                           Rng& rng) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  int guard = 0;
  while (out.size() < n) {
    std::string s;
    if (corpus == "ssn") s = sample_ssn(rng);
    else if (corpus == "ccn") s = sample_ccn(rng);
    else if (corpus == "password") s = sample_password(rng);
    else throw ConfigError("unknown corpus: " + corpus);
    if (seen.insert(s).second) out.push_back(s);
    if (++guard > 100000) throw ConfigError("corpus too small for dictionary");
  }
  return out;
}

}  // namespace leaklab::datasets
