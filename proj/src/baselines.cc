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


#include "dpfair/baselines.h"

#include <algorithm>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "dpfair/marginals.h"

namespace dpfair {
namespace {

ConditionalTable RootTable(int attribute, std::vector<double> probabilities) {
  ConditionalTable table;
  table.attribute = attribute;
  table.cardinality = static_cast<int>(probabilities.size());
  table.probabilities = std::move(probabilities);
  return table;
}

BayesNet EmptyNet(int d) {
  BayesNet net;
  net.ordering.resize(d);
  std::iota(net.ordering.begin(), net.ordering.end(), 0);
  net.conditionals.resize(d);
  return net;
}

}  // namespace

absl::StatusOr<JointModel> IndependentFit(const Dataset& data,
                                          PrivacyAccountant& accountant,
                                          NoiseKind noise, Rng& rng) {
  const Schema& schema = data.schema();
  const int d = schema.num_attributes();
  absl::StatusOr<std::vector<PrivacyAccountant::NodeId>> parts =
      accountant.SplitEven(PrivacyAccountant::kRoot, d);
  if (!parts.ok()) return parts.status();
  BayesNet net = EmptyNet(d);
  for (int a = 0; a < d; ++a) {
    absl::StatusOr<PrivacyBudget> budget =
        accountant.Consume((*parts)[a], absl::StrCat("independent 1-way ", a));
    if (!budget.ok()) return budget.status();
    absl::StatusOr<ContingencyTable> noisy = NoisyMarginal(
        data, *MarginalQuery::Create({a}, schema), *budget, {noise, 1.0}, rng);
    if (!noisy.ok()) return noisy.status();
    net.conditionals[a] = RootTable(a, ToDistribution(*noisy).cells);
  }
  JointModel model;
  model.schema = data.shared_schema();
  model.kind = "independent";
  model.body = std::move(net);
  return model;
}

absl::StatusOr<JointModel> DegenerateFit(const Dataset& data,
                                         PrivacyAccountant& accountant,
                                         NoiseKind noise, Rng& rng) {
  const Schema& schema = data.schema();
  const int d = schema.num_attributes();
  const int label = schema.label_attribute();
  absl::StatusOr<PrivacyBudget> budget =
      accountant.Consume(PrivacyAccountant::kRoot, "degenerate label prior");
  if (!budget.ok()) return budget.status();
  absl::StatusOr<ContingencyTable> noisy = NoisyMarginal(
      data, *MarginalQuery::Create({label}, schema), *budget, {noise, 1.0}, rng);
  if (!noisy.ok()) return noisy.status();
  const int majority = static_cast<int>(
      std::max_element(noisy->cells.begin(), noisy->cells.end()) - noisy->cells.begin());

  BayesNet net = EmptyNet(d);
  for (int a = 0; a < d; ++a) {
    const int k = schema.cardinality(a);
    std::vector<double> p(k, 1.0 / k);
    if (a == label) {
      std::fill(p.begin(), p.end(), 0.0);
      p[majority] = 1.0;
    }
    net.conditionals[a] = RootTable(a, std::move(p));
  }
  JointModel model;
  model.schema = data.shared_schema();
  model.kind = "degenerate";
  model.body = std::move(net);
  return model;
}

}  // namespace dpfair
