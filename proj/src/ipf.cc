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

#include "dpfair/ipf.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "absl/strings/str_cat.h"

namespace dpfair {
namespace {

// For each cell of `table`, the index of the matching cell of `target`.
std::vector<size_t> CellMap(const ContingencyTable& table,
                            const ContingencyTable& target) {
  std::vector<size_t> positions;
  for (int a : target.attributes) {
    positions.push_back(static_cast<size_t>(
        std::find(table.attributes.begin(), table.attributes.end(), a) -
        table.attributes.begin()));
  }
  const std::vector<size_t> strides = table.Strides();
  std::vector<size_t> map(table.cells.size());
  for (size_t cell = 0; cell < table.cells.size(); ++cell) {
    size_t index = 0;
    for (size_t p : positions) {
      index = index * table.cardinalities[p] +
              (cell / strides[p]) % table.cardinalities[p];
    }
    map[cell] = index;
  }
  return map;
}

absl::Status CheckTable(const ContingencyTable& t, const Schema& schema) {
  if (t.attributes.empty() || t.attributes.size() != t.cardinalities.size()) {
    return absl::InvalidArgumentError("target table has no attributes");
  }
  size_t size = 1;
  for (size_t j = 0; j < t.attributes.size(); ++j) {
    const int a = t.attributes[j];
    if (a < 0 || a >= schema.num_attributes() ||
        (j > 0 && t.attributes[j - 1] >= a)) {
      return absl::InvalidArgumentError("target attributes must be sorted and in range");
    }
    if (t.cardinalities[j] != schema.cardinality(a)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "target arity for attribute ", a, " is ", t.cardinalities[j],
          ", schema says ", schema.cardinality(a)));
    }
    size *= static_cast<size_t>(t.cardinalities[j]);
  }
  if (size != t.cells.size()) {
    return absl::InvalidArgumentError("target cell count does not match its shape");
  }
  return absl::OkStatus();
}

ContingencyTable UniformTable(std::vector<int> attributes, const Schema& schema) {
  ContingencyTable table = ZeroTable(std::move(attributes), schema);
  std::fill(table.cells.begin(), table.cells.end(),
            1.0 / static_cast<double>(table.cells.size()));
  table.total = 1.0;
  return table;
}

}  // namespace

IpfResult FitTable(ContingencyTable& table,
                   const std::vector<ContingencyTable>& targets, int max_sweeps,
                   double tol) {
  std::vector<std::vector<size_t>> maps;
  maps.reserve(targets.size());
  for (const ContingencyTable& t : targets) maps.push_back(CellMap(table, t));

  auto marginal = [&](size_t k) {
    std::vector<double> m(targets[k].cells.size(), 0.0);
    for (size_t cell = 0; cell < table.cells.size(); ++cell) {
      m[maps[k][cell]] += table.cells[cell];
    }
    return m;
  };
  auto residual = [&] {
    double worst = 0.0;
    for (size_t k = 0; k < targets.size(); ++k) {
      const std::vector<double> m = marginal(k);
      double gap = 0.0;
      for (size_t c = 0; c < m.size(); ++c) gap += std::abs(m[c] - targets[k].cells[c]);
      worst = std::max(worst, gap);
    }
    return worst;
  };

  IpfResult result;
  result.residual = residual();
  while (result.sweeps < max_sweeps && result.residual >= tol) {
    for (size_t k = 0; k < targets.size(); ++k) {
      const std::vector<double> m = marginal(k);
      std::vector<double> ratio(m.size(), 0.0);
      for (size_t c = 0; c < m.size(); ++c) {
        ratio[c] = m[c] > 0.0 ? targets[k].cells[c] / m[c] : 0.0;
      }
      for (size_t cell = 0; cell < table.cells.size(); ++cell) {
        table.cells[cell] *= ratio[maps[k][cell]];
      }
    }
    ++result.sweeps;
    result.residual = residual();
  }
  table.total = table.Sum();
  return result;
}

std::vector<ContingencyTable> MergeTargets(const std::vector<ContingencyTable>& tables) {
  std::map<std::vector<int>, std::pair<ContingencyTable, int>> groups;
  for (const ContingencyTable& t : tables) {
    const ContingencyTable normalized = ToDistribution(t);
    auto [it, inserted] = groups.try_emplace(t.attributes, normalized, 1);
    if (!inserted) {
      for (size_t c = 0; c < normalized.cells.size(); ++c) {
        it->second.first.cells[c] += normalized.cells[c];
      }
      ++it->second.second;
    }
  }
  std::vector<ContingencyTable> out;
  for (auto& [attributes, entry] : groups) {
    for (double& c : entry.first.cells) c /= entry.second;
    entry.first.total = entry.first.Sum();
    out.push_back(std::move(entry.first));
  }
  return out;
}

absl::StatusOr<JointModel> IpfFit(const std::vector<ContingencyTable>& measured,
                                  std::shared_ptr<const Schema> schema,
                                  const IpfConfig& config) {
  if (measured.empty()) return absl::InvalidArgumentError("no tables to fit");
  const int d = schema->num_attributes();
  std::vector<bool> covered(d, false);
  for (const ContingencyTable& t : measured) {
    if (absl::Status s = CheckTable(t, *schema); !s.ok()) return s;
    for (int a : t.attributes) covered[a] = true;
  }
  for (int a = 0; a < d; ++a) {
    if (!covered[a]) {
      return absl::InvalidArgumentError(
          absl::StrCat("attribute ", schema->attribute(a).name,
                       " is not covered by any table"));
    }
  }
  const std::vector<ContingencyTable> targets = MergeTargets(measured);

  JointModel model;
  model.schema = schema;
  if (schema->DomainSize() <= config.domain_cap) {
    std::vector<int> all(d);
    for (int a = 0; a < d; ++a) all[a] = a;
    ContingencyTable joint = UniformTable(all, *schema);
    const IpfResult fit = FitTable(joint, targets, config.max_sweeps, config.tol);
    ExplicitJoint explicit_joint;
    explicit_joint.cardinalities = joint.cardinalities;
    explicit_joint.probabilities = std::move(joint.cells);
    model.kind = "explicit";
    model.body = std::move(explicit_joint);
    model.fit_residual = fit.residual;
    return model;
  }

  // Interaction graph of the targets.
  std::vector<std::set<int>> neighbors(d);
  for (const ContingencyTable& t : targets) {
    for (int a : t.attributes) {
      for (int b : t.attributes) {
        if (a != b) neighbors[a].insert(b);
      }
    }
  }
  auto clique_size = [&](int v) {
    size_t size = static_cast<size_t>(schema->cardinality(v));
    for (int u : neighbors[v]) size *= static_cast<size_t>(schema->cardinality(u));
    return size;
  };

  FactoredModel factored;
  std::vector<bool> eliminated(d, false);
  std::vector<int> elimination;
  std::vector<std::vector<int>> parents(d);
  for (int step = 0; step < d; ++step) {
    int best = -1;
    size_t best_size = 0;
    for (int v = 0; v < d; ++v) {
      if (eliminated[v]) continue;
      const size_t size = clique_size(v);
      if (best == -1 || size < best_size) {
        best = v;
        best_size = size;
      }
    }
    while (clique_size(best) > config.clique_cap) {
      int drop = -1;
      for (int u : neighbors[best]) {
        if (drop == -1 || schema->cardinality(u) >= schema->cardinality(drop)) drop = u;
      }
      neighbors[best].erase(drop);
      neighbors[drop].erase(best);
      ++factored.pruned_neighbors;
    }
    parents[best].assign(neighbors[best].begin(), neighbors[best].end());
    for (int u : parents[best]) {
      neighbors[u].erase(best);
      for (int w : parents[best]) {
        if (u != w) neighbors[u].insert(w);
      }
    }
    eliminated[best] = true;
    elimination.push_back(best);
  }

  BayesNet& plan = factored.plan;
  plan.ordering.assign(elimination.rbegin(), elimination.rend());
  plan.conditionals.resize(d);
  for (int v : plan.ordering) {
    std::vector<int> clique = parents[v];
    clique.push_back(v);
    std::sort(clique.begin(), clique.end());
    std::vector<ContingencyTable> local;
    for (const ContingencyTable& t : targets) {
      std::vector<int> shared;
      std::set_intersection(t.attributes.begin(), t.attributes.end(), clique.begin(),
                            clique.end(), std::back_inserter(shared));
      if (shared.empty()) continue;
      absl::StatusOr<ContingencyTable> projected = Project(t, shared);
      if (!projected.ok()) return projected.status();
      local.push_back(*std::move(projected));
    }
    const std::vector<ContingencyTable> local_targets = MergeTargets(local);
    ContingencyTable table = UniformTable(clique, *schema);
    const IpfResult fit = FitTable(table, local_targets, config.max_sweeps, config.tol);
    factored.fit_residual = std::max(factored.fit_residual, fit.residual);
    factored.sweeps = std::max(factored.sweeps, fit.sweeps);
    absl::StatusOr<ConditionalTable> conditional = ConditionalFromTable(table, v);
    if (!conditional.ok()) return conditional.status();
    plan.conditionals[v] = *std::move(conditional);
    factored.cliques.push_back(std::move(table));
  }
  model.kind = "factored";
  model.fit_residual = factored.fit_residual;
  model.body = std::move(factored);
  return model;
}

}  // namespace dpfair
