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

// Sampleable estimates of a data distribution produced by the synthesizers.
//
// Every model either stores the full joint explicitly or factors it into
// conditionals p(attribute | parents) evaluated in a fixed order, which is
// all that sampling needs. Sampling reads only the model, never data.

#ifndef DPFAIR_JOINT_MODEL_H_
#define DPFAIR_JOINT_MODEL_H_

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpfair/data.h"
#include "dpfair/marginals.h"
#include "dpfair/random.h"
#include "json.hpp"

namespace dpfair {

// Probability vector over the full cross product of a schema, row-major in
// attribute order.
struct ExplicitJoint {
  std::vector<int> cardinalities;
  std::vector<double> probabilities;
};

// p(attribute | parents). `parents` is ascending; probabilities hold one
// row of `cardinality` entries per parent configuration, parent
// configurations in row-major order.
struct ConditionalTable {
  int attribute = 0;
  int cardinality = 0;
  std::vector<int> parents;
  std::vector<int> parent_cardinalities;
  std::vector<double> probabilities;

  size_t num_rows() const { return probabilities.size() / cardinality; }
  size_t RowOf(std::span<const int> record) const;
  std::span<const double> Row(size_t r) const {
    return {probabilities.data() + r * cardinality, static_cast<size_t>(cardinality)};
  }
};

// Conditional of `child` given the table's other attributes, from a
// nonnegative table. Rows without mass become uniform.
absl::StatusOr<ConditionalTable> ConditionalFromTable(const ContingencyTable& table,
                                                      int child);

// Conditionals indexed by attribute; `ordering` lists every attribute once
// and each attribute's parents appear before it.
struct BayesNet {
  std::vector<int> ordering;
  std::vector<ConditionalTable> conditionals;
};

// Checks the ordering is a permutation, parents precede children, table
// shapes match the schema, and every row sums to 1 within 1e-9.
absl::Status ValidateBayesNet(const BayesNet& net, const Schema& schema);

// Undirected tree over attributes, stored as (parent, child) edges directed
// away from `root`.
struct SpanningTree {
  std::vector<std::pair<int, int>> edges;
  int root = 0;
};

// Exactly n-1 edges, every attribute reachable from the root, no cycles.
bool IsSpanningTree(const SpanningTree& tree, int num_attributes);

// Root marginal times p(child | parent) along tree edges.
struct TreeModel {
  SpanningTree tree;
  BayesNet net;
};

// Normalized clique tables fitted by iterative proportional fitting, and the
// conditional sampling plan derived from them.
struct FactoredModel {
  std::vector<ContingencyTable> cliques;
  BayesNet plan;
  double fit_residual = 0.0;
  int sweeps = 0;
  // Neighbors dropped to keep cliques under the size cap.
  int pruned_neighbors = 0;
};

using ModelBody = std::variant<ExplicitJoint, FactoredModel, TreeModel, BayesNet>;

struct JointModel {
  std::shared_ptr<const Schema> schema;
  // "explicit", "factored", "tree", "bayesnet", "independent", "degenerate".
  std::string kind;
  ModelBody body;
  // Largest L1 gap between a fitted and a target marginal, when fitted.
  double fit_residual = 0.0;
};

// n iid records. Explicit joints use inverse-CDF over the flattened domain;
// factored models sample each attribute from its conditional in order.
Dataset Sample(const JointModel& model, size_t n, Rng& rng);

// The factorization a sampler walks, or nullptr for explicit joints.
const BayesNet* SamplingPlan(const JointModel& model);

// Full joint as an explicit table. Fails if the domain exceeds max_cells.
absl::StatusOr<ExplicitJoint> ToExplicit(const JointModel& model,
                                         size_t max_cells = 1 << 22);

// Marginal of an explicit joint over sorted attributes (cells sum to 1).
ContingencyTable JointMarginal(const ExplicitJoint& joint,
                               std::span<const int> attributes);

nlohmann::json ModelToJson(const JointModel& model);
absl::StatusOr<JointModel> ModelFromJson(const nlohmann::json& json);

}  // namespace dpfair

#endif  // DPFAIR_JOINT_MODEL_H_
