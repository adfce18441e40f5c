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

// Tree-structured synthesizer: noisy 1-way marginals, a private maximum
// spanning tree over pairwise mutual information, and noisy 2-way marginals
// on the selected edges.

#ifndef DPFAIR_MST_H_
#define DPFAIR_MST_H_

#include <array>
#include <vector>

#include "absl/status/statusor.h"
#include "dpfair/data.h"
#include "dpfair/joint_model.h"
#include "dpfair/mechanisms.h"
#include "dpfair/random.h"

namespace dpfair {

struct MstConfig {
  // Shares of the budget for 1-way measurement, structure, 2-way measurement.
  std::array<double, 3> phase_weights = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  NoiseKind noise = NoiseKind::kLaplace;
};

// Symmetric matrix of plug-in mutual information (nats) between attribute
// pairs; the diagonal is zero.
std::vector<std::vector<double>> PairwiseMutualInformation(const Dataset& data);

// Spends exactly accountant.total(). The tree is grown from attribute 0 by
// repeated exponential-mechanism choices among edges leaving the current
// tree. The result is a "tree" model whose sampling plan visits attributes
// in breadth-first order from the root.
absl::StatusOr<JointModel> MstFit(const Dataset& data, PrivacyAccountant& accountant,
                                  const MstConfig& config, Rng& rng);

// Total mutual information of the tree's edges under `weights`.
double TreeWeight(const SpanningTree& tree,
                  const std::vector<std::vector<double>>& weights);

}  // namespace dpfair

#endif  // DPFAIR_MST_H_
