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

// Iterative proportional fitting of a distribution to marginal targets.

#ifndef DPFAIR_IPF_H_
#define DPFAIR_IPF_H_

#include <cstddef>
#include <memory>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpfair/data.h"
#include "dpfair/joint_model.h"
#include "dpfair/marginals.h"

namespace dpfair {

struct IpfConfig {
  int max_sweeps = 200;
  // Stop once every target is matched within this L1 distance.
  double tol = 1e-7;
  // Largest full domain fitted as an explicit joint.
  size_t domain_cap = 1'000'000;
  // Largest clique in the factored approximation.
  size_t clique_cap = 20'000;
};

struct IpfResult {
  // Largest L1 gap between a target and the fitted marginal.
  double residual = 0.0;
  int sweeps = 0;
};

// Rescales `table` in place until its marginals match `targets`. Every
// target must be over a sorted subset of the table's attributes and sum to
// the table's mass. Cells that are zero stay zero.
IpfResult FitTable(ContingencyTable& table,
                   const std::vector<ContingencyTable>& targets, int max_sweeps,
                   double tol);

// Targets over identical attribute sets are averaged, then each is made a
// distribution with ToDistribution. Output order is by attribute set.
std::vector<ContingencyTable> MergeTargets(const std::vector<ContingencyTable>& tables);

// Fits a model to normalized marginal targets that together cover every
// attribute. Small domains get an explicit joint fitted from uniform.
// Larger domains get a factored model: attributes are eliminated greedily
// (smallest clique first, largest neighbors pruned when a clique would
// exceed the cap), each clique is fitted locally against the projections of
// the targets onto it, and sampling follows the reverse elimination order.
absl::StatusOr<JointModel> IpfFit(const std::vector<ContingencyTable>& measured,
                                  std::shared_ptr<const Schema> schema,
                                  const IpfConfig& config = {});

}  // namespace dpfair

#endif  // DPFAIR_IPF_H_
