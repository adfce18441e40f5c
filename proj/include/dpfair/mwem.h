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

// Multiplicative-weights synthesizer over a marginal workload.
//
// Each iteration privately picks the worst-answered workload query with the
// exponential mechanism, measures it with additive noise, and updates the
// model. Small domains keep an explicit joint and use multiplicative-weights
// updates; larger domains refit a factored model by IPF after every
// measurement.

#ifndef DPFAIR_MWEM_H_
#define DPFAIR_MWEM_H_

#include <cstddef>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpfair/data.h"
#include "dpfair/ipf.h"
#include "dpfair/joint_model.h"
#include "dpfair/marginals.h"
#include "dpfair/mechanisms.h"
#include "dpfair/random.h"

namespace dpfair {

class Workload {
 public:
  // Queries must be distinct; the list must be nonempty.
  static absl::StatusOr<Workload> Create(std::vector<MarginalQuery> queries);

  // Every 2-way query plus every 3-way query that contains the label.
  static Workload Default(const Schema& schema);

  const std::vector<MarginalQuery>& queries() const { return queries_; }
  size_t size() const { return queries_.size(); }

 private:
  explicit Workload(std::vector<MarginalQuery> queries)
      : queries_(std::move(queries)) {}
  std::vector<MarginalQuery> queries_;
};

struct MwemConfig {
  int iterations = 30;
  size_t domain_cap = 1'000'000;
  // Passes over all measurements after each new one.
  int mw_repetitions = 20;
  NoiseKind noise = NoiseKind::kLaplace;
  // Rows sampled to answer the workload from a factored model.
  size_t answer_sample_rows = 20'000;
  IpfConfig ipf;

  absl::Status Validate() const;
};

// Spends exactly accountant.total(): T equal rounds, each split evenly
// between selection and measurement.
absl::StatusOr<JointModel> MwemFit(const Dataset& data, const Workload& workload,
                                   PrivacyAccountant& accountant,
                                   const MwemConfig& config, Rng& rng);

// Largest L1 distance between a model marginal and the exact normalized data
// marginal over the workload. Exact for explicit joints; factored models are
// answered from `sample_rows` draws.
double MaxWorkloadError(const JointModel& model, const Dataset& data,
                        const Workload& workload, Rng& rng,
                        size_t sample_rows = 100'000);

}  // namespace dpfair

#endif  // DPFAIR_MWEM_H_
