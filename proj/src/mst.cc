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


#include "dpfair/mst.h"

#include <algorithm>
#include <queue>
#include <utility>

#include "absl/strings/str_cat.h"
#include "dpfair/marginals.h"

namespace dpfair {

std::vector<std::vector<double>> PairwiseMutualInformation(const Dataset& data) {
  const int d = data.schema().num_attributes();
  std::vector<std::vector<double>> mi(d, std::vector<double>(d, 0.0));
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      absl::StatusOr<double> value = MutualInformation(CountTable(data, {a, b}));
      mi[a][b] = mi[b][a] = value.ok() ? *value : 0.0;
    }
  }
  return mi;
}

double TreeWeight(const SpanningTree& tree,
                  const std::vector<std::vector<double>>& weights) {
  double total = 0.0;
  for (const auto& [u, v] : tree.edges) total += weights[u][v];
  return total;
}

absl::StatusOr<JointModel> MstFit(const Dataset& data, PrivacyAccountant& accountant,
                                  const MstConfig& config, Rng& rng) {
  const Schema& schema = data.schema();
  const int d = schema.num_attributes();
  if (d < 2) return absl::InvalidArgumentError("MST needs at least two attributes");
  if (data.empty()) return absl::InvalidArgumentError("MST needs data");
  const NoiseMechanism mechanism{config.noise, 1.0};

  absl::StatusOr<std::vector<PrivacyAccountant::NodeId>> phases =
      accountant.Split(PrivacyAccountant::kRoot, config.phase_weights);
  if (!phases.ok()) return phases.status();
  absl::StatusOr<std::vector<PrivacyAccountant::NodeId>> one_way =
      accountant.SplitEven((*phases)[0], d);
  absl::StatusOr<std::vector<PrivacyAccountant::NodeId>> steps =
      accountant.SplitEven((*phases)[1], d - 1);
  absl::StatusOr<std::vector<PrivacyAccountant::NodeId>> two_way =
      accountant.SplitEven((*phases)[2], d - 1);
  if (!one_way.ok()) return one_way.status();
  if (!steps.ok()) return steps.status();
  if (!two_way.ok()) return two_way.status();

  // Phase 1: every 1-way marginal.
  std::vector<ContingencyTable> singles;
  for (int a = 0; a < d; ++a) {
    absl::StatusOr<PrivacyBudget> budget =
        accountant.Consume((*one_way)[a], absl::StrCat("mst 1-way ", a));
    if (!budget.ok()) return budget.status();
    absl::StatusOr<ContingencyTable> noisy = NoisyMarginal(
        data, *MarginalQuery::Create({a}, schema), *budget, mechanism, rng);
    if (!noisy.ok()) return noisy.status();
    singles.push_back(*std::move(noisy));
  }

  // Phase 2: Prim's algorithm with private edge choices.
  const std::vector<std::vector<double>> mi = PairwiseMutualInformation(data);
  const double sensitivity = MutualInformationSensitivity(data.size());
  SpanningTree tree;
  tree.root = 0;
  std::vector<bool> in_tree(d, false);
  in_tree[tree.root] = true;
  for (int step = 0; step < d - 1; ++step) {
    std::vector<std::pair<int, int>> candidates;
    std::vector<double> scores;
    for (int u = 0; u < d; ++u) {
      if (!in_tree[u]) continue;
      for (int v = 0; v < d; ++v) {
        if (in_tree[v]) continue;
        candidates.emplace_back(u, v);
        scores.push_back(mi[u][v]);
      }
    }
    absl::StatusOr<PrivacyBudget> budget =
        accountant.Consume((*steps)[step], absl::StrCat("mst edge ", step));
    if (!budget.ok()) return budget.status();
    absl::StatusOr<size_t> chosen =
        ExponentialChoice(scores, sensitivity, budget->epsilon, rng);
    if (!chosen.ok()) return chosen.status();
    tree.edges.push_back(candidates[*chosen]);
    in_tree[candidates[*chosen].second] = true;
  }

  // Phase 3: 2-way marginal per edge, turned into p(child | parent).
  TreeModel model;
  model.tree = tree;
  BayesNet& net = model.net;
  net.conditionals.resize(d);
  {
    absl::StatusOr<ConditionalTable> root =
        ConditionalFromTable(ToDistribution(singles[tree.root]), tree.root);
    if (!root.ok()) return root.status();
    net.conditionals[tree.root] = *std::move(root);
  }
  std::vector<std::vector<int>> children(d);
  for (size_t e = 0; e < tree.edges.size(); ++e) {
    const auto [parent, child] = tree.edges[e];
    children[parent].push_back(child);
    absl::StatusOr<PrivacyBudget> budget =
        accountant.Consume((*two_way)[e], absl::StrCat("mst 2-way ", e));
    if (!budget.ok()) return budget.status();
    absl::StatusOr<ContingencyTable> noisy = NoisyMarginal(
        data, *MarginalQuery::Create({parent, child}, schema), *budget, mechanism, rng);
    if (!noisy.ok()) return noisy.status();
    absl::StatusOr<ConditionalTable> conditional =
        ConditionalFromTable(ToDistribution(*noisy), child);
    if (!conditional.ok()) return conditional.status();
    net.conditionals[child] = *std::move(conditional);
  }
  std::queue<int> frontier;
  frontier.push(tree.root);
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    net.ordering.push_back(u);
    for (int v : children[u]) frontier.push(v);
  }

  JointModel out;
  out.schema = data.shared_schema();
  out.kind = "tree";
  out.body = std::move(model);
  return out;
}

}  // namespace dpfair
