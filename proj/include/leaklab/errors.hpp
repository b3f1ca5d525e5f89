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

#ifndef LEAKLAB_ERRORS_HPP
#define LEAKLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace leaklab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A record/cell/node does not fit the single-page, single-root-node model.
struct OversizedPayload : Error {
  using Error::Error;
};

struct NonMonotoneDocid : Error {
  using Error::Error;
};

struct FilenameTooLong : Error {
  using Error::Error;
};

struct MalformedPassphrase : Error {
  using Error::Error;
};

// Frame boundaries of a backup cannot be recovered without the key.
struct BoundaryLost : Error {
  using Error::Error;
};

struct WindowOverflow : Error {
  using Error::Error;
};

// An attack's setup cannot produce a working plan for the given inputs.
struct InfeasibleCandidate : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace leaklab

#endif  // LEAKLAB_ERRORS_HPP
