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


#include "dpfair/privbayes.h"

#include <algorithm>
#include <map>
#include <utility>

#include "absl/strings/str_cat.h"
#include "dpfair/marginals.h"

namespace dpfair {
namespace {

void Subsets(const std::vector<int>& pool, size_t size, size_t start,
             std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (current.size() == size) {
    out.push_back(current);
    return;
  }
  for (size_t i = start; i < pool.size(); ++i) {
    current.push_back(pool[i]);
    Subsets(pool, size, i + 1, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> ParentSetCandidates(const std::vector<int>& pool,
                                                  int max_size) {
  std::vector<int> sorted = pool;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::vector<int>> out;
  const size_t limit = std::min(static_cast<size_t>(std::max(max_size, 0)), sorted.size());
  for (size_t size = 1; size <= limit; ++size) {
    std::vector<int> current;
    Subsets(sorted, size, 0, current, out);
  }
  return out;
}

absl::StatusOr<JointModel> PrivBayesFit(const Dataset& data,
                                        PrivacyAccountant& accountant,
                                        const PrivBayesConfig& config, Rng& rng) {
  const Schema& schema = data.schema();
  const int d = schema.num_attributes();
  if (config.k < 1 || config.k >= d) {
    return absl::InvalidArgumentError(
        absl::StrCat("PrivBayes needs 1 <= k < ", d, ", got k = ", config.k));
  }
  if (!(config.structure_share > 0.0 && config.structure_share < 1.0)) {
    return absl::InvalidArgumentError("structure share must be in (0, 1)");
  }
  if (data.empty()) return absl::InvalidArgumentError("PrivBayes needs data");
  const NoiseMechanism mechanism{config.noise, 1.0};

  const std::vector<double> shares = {config.structure_share,
                                      1.0 - config.structure_share};
  absl::StatusOr<std::vector<PrivacyAccountant::NodeId>> halves =
      accountant.Split(PrivacyAccountant::kRoot, shares);
  if (!halves.ok()) return halves.status();
  absl::StatusOr<std::vector<PrivacyAccountant::NodeId>> steps =
      accountant.SplitEven((*halves)[0], d - 1);
  absl::StatusOr<std::vector<PrivacyAccountant::NodeId>> tables =
      accountant.SplitEven((*halves)[1], d);
  if (!steps.ok()) return steps.status();
  if (!tables.ok()) return tables.status();

  const double sensitivity = MutualInformationSensitivity(data.size());
  std::map<std::pair<int, std::vector<int>>, double> mi_cache;
  auto score = [&](int attribute, const std::vector<int>& parents) -> double {
    auto key = std::make_pair(attribute, parents);
    if (auto it = mi_cache.find(key); it != mi_cache.end()) return it->second;
    std::vector<int> attributes = parents;
    attributes.push_back(attribute);
    std::sort(attributes.begin(), attributes.end());
    absl::StatusOr<double> mi =
        MutualInformationWithRest(CountTable(data, attributes), attribute);
    const double value = mi.ok() ? *mi : 0.0;
    mi_cache.emplace(std::move(key), value);
    return value;
  };

  std::vector<int> ordering = {static_cast<int>(rng.Index(d))};
  std::vector<std::vector<int>> parents(d);
  std::vector<bool> chosen(d, false);
  chosen[ordering[0]] = true;
  for (int step = 0; step < d - 1; ++step) {
    const std::vector<std::vector<int>> parent_sets =
        ParentSetCandidates(ordering, config.k);
    std::vector<std::pair<int, size_t>> candidates;
    std::vector<double> scores;
    for (int a = 0; a < d; ++a) {
      if (chosen[a]) continue;
      for (size_t p = 0; p < parent_sets.size(); ++p) {
        candidates.emplace_back(a, p);
        scores.push_back(score(a, parent_sets[p]));
      }
    }
    absl::StatusOr<PrivacyBudget> budget =
        accountant.Consume((*steps)[step], absl::StrCat("privbayes structure ", step));
    if (!budget.ok()) return budget.status();
    absl::StatusOr<size_t> pick =
        ExponentialChoice(scores, sensitivity, budget->epsilon, rng);
    if (!pick.ok()) return pick.status();
    const auto [attribute, set] = candidates[*pick];
    parents[attribute] = parent_sets[set];
    chosen[attribute] = true;
    ordering.push_back(attribute);
  }

  BayesNet net;
  net.ordering = ordering;
  net.conditionals.resize(d);
  for (int i = 0; i < d; ++i) {
    const int a = ordering[i];
    std::vector<int> attributes = parents[a];
    attributes.push_back(a);
    std::sort(attributes.begin(), attributes.end());
    ContingencyTable table = CountTable(data, attributes);
    absl::StatusOr<PrivacyBudget> budget =
        accountant.Consume((*tables)[i], absl::StrCat("privbayes table ", a));
    if (!budget.ok()) return budget.status();
    absl::StatusOr<std::vector<double>> noisy =
        AddNoise(table.cells, mechanism, *budget, rng);
    if (!noisy.ok()) return noisy.status();
    table.cells = *std::move(noisy);
    absl::StatusOr<ConditionalTable> conditional =
        ConditionalFromTable(ToDistribution(table), a);
    if (!conditional.ok()) return conditional.status();
    net.conditionals[a] = *std::move(conditional);
  }

  JointModel out;
  out.schema = data.shared_schema();
  out.kind = "bayesnet";
  out.body = std::move(net);
  return out;
}

}  // namespace dpfair
