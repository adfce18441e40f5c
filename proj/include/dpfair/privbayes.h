// Copyright 2026 The dpfair Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Bayesian-network synthesizer: private greedy structure search scored by
// mutual information, then noisy conditional tables.

#ifndef DPFAIR_PRIVBAYES_H_
#define DPFAIR_PRIVBAYES_H_

#include <vector>

#include "absl/status/statusor.h"
#include "dpfair/data.h"
#include "dpfair/joint_model.h"
#include "dpfair/mechanisms.h"
#include "dpfair/random.h"

namespace dpfair {

struct PrivBayesConfig {
  // Maximum parents per attribute; 1 <= k < number of attributes.
  int k = 2;
  // Share of the budget spent on structure; the rest measures tables.
  double structure_share = 0.5;
  NoiseKind noise = NoiseKind::kLaplace;
};

// Spends exactly accountant.total(). The first attribute is drawn
// uniformly; each later position picks an (attribute, parent set) pair by
// the exponential mechanism over I(attribute; parents), parent sets ranging
// over every subset of the chosen attributes of size 1 to min(k, #chosen).
absl::StatusOr<JointModel> PrivBayesFit(const Dataset& data,
                                        PrivacyAccountant& accountant,
                                        const PrivBayesConfig& config, Rng& rng);

// Every subset of `pool` with 1 to max_size elements, each sorted, in
// lexicographic order of size then content.
std::vector<std::vector<int>> ParentSetCandidates(const std::vector<int>& pool,
                                                  int max_size);

}  // namespace dpfair

#endif  // DPFAIR_PRIVBAYES_H_
