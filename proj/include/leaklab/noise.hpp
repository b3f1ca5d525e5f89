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

#ifndef LEAKLAB_NOISE_HPP
#define LEAKLAB_NOISE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "leaklab/client.hpp"
#include "leaklab/rng.hpp"

namespace leaklab {

// Non-adversarial activity between backups.
//
// The weighted action mix: send message 15%, receive message 15%, send image
// 15%, receive image 15%, call 10%, receive call 10%, create group 10%,
// delete message 5%, delete group 5%. Infeasible deletes are resampled.
// The dedup scenarios instead use a fixed per-round recipe of texts plus
// attachments whose sizes sit outside the candidate set.
struct NoiseSpec {
  int actions_per_interval = 0;
  bool weighted = true;

  // Dedup-scenario recipe.
  int texts_per_round = 0;
  int attachments_per_round = 0;
  size_t attachment_size = 0;       // 0 = draw from [2000, 30000]
  size_t attachment_fname_len = 0;  // 0 = draw from [5, 60]

  // When set, one noise attachment per round collides with this exact
  // (content size, filename length) pair; used by the designed-failure test.
  size_t collide_size = 0;
  size_t collide_fname_len = 0;

  size_t max_text_len = 120;
  size_t media_min = 2000;
  size_t media_max = 30000;

  bool quiet() const {
    return actions_per_interval == 0 && texts_per_round == 0 &&
           attachments_per_round == 0 && collide_size == 0;
  }
};

struct NoiseStats {
  int actions = 0;
  int resampled = 0;
};

// Applies one between-backup interval of noise to the victim client.
NoiseStats apply_noise_interval(Client& client, const NoiseSpec& spec,
                                Rng& rng, int64_t& clock);

}  // namespace leaklab

#endif  // LEAKLAB_NOISE_HPP
