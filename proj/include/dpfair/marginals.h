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

// Contingency tables over small attribute sets.
//
// Cells are laid out row-major over the attributes in ascending index order:
// the last attribute varies fastest. This ordering is also the JSON wire
// format.

#ifndef DPFAIR_MARGINALS_H_
#define DPFAIR_MARGINALS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpfair/data.h"
#include "dpfair/mechanisms.h"
#include "dpfair/random.h"
#include "json.hpp"

namespace dpfair {

inline constexpr int kMaxQueryArity = 3;

// A sorted set of 1 to 3 distinct attribute indices.
class MarginalQuery {
 public:
  static absl::StatusOr<MarginalQuery> Create(std::vector<int> attributes,
                                              const Schema& schema);

  const std::vector<int>& attributes() const { return attributes_; }
  int arity() const { return static_cast<int>(attributes_.size()); }
  bool Contains(int attribute) const;

  friend bool operator==(const MarginalQuery&, const MarginalQuery&) = default;
  friend auto operator<=>(const MarginalQuery&, const MarginalQuery&) = default;

 private:
  explicit MarginalQuery(std::vector<int> attributes)
      : attributes_(std::move(attributes)) {}
  std::vector<int> attributes_;
};

struct ContingencyTable {
  std::vector<int> attributes;     // ascending
  std::vector<int> cardinalities;  // per attribute
  std::vector<double> cells;
  double total = 0.0;              // sum of cells when built

  size_t size() const { return cells.size(); }
  // Stride of position j in `attributes` within the cell vector.
  std::vector<size_t> Strides() const;
  // Cell index of a full record (indexed by schema attribute).
  size_t CellOf(std::span<const int> record) const;
  double Sum() const;
};

// Empty table of zeros over the given sorted attributes.
ContingencyTable ZeroTable(std::vector<int> attributes, const Schema& schema);

// Exact counts over any sorted, duplicate-free attribute set. Workload code
// should go through MarginalQuery; wider sets are used for model factors.
ContingencyTable CountTable(const Dataset& data, std::vector<int> attributes);

ContingencyTable Marginal(const Dataset& data, const MarginalQuery& query);

// Exact marginal plus independent per-cell noise. Sensitivity is taken from
// `mechanism` (1 for a count table under add/remove-one-record neighbors).
// The result is not clamped.
absl::StatusOr<ContingencyTable> NoisyMarginal(const Dataset& data,
                                               const MarginalQuery& query,
                                               const PrivacyBudget& budget,
                                               const NoiseMechanism& mechanism,
                                               Rng& rng);

// Clamps negative cells to 0 and rescales to sum 1; a table with no
// positive cell becomes uniform.
ContingencyTable ToDistribution(const ContingencyTable& table);

// Sums out every attribute not in `attributes` (which must be a sorted
// subset of the table's attributes).
absl::StatusOr<ContingencyTable> Project(const ContingencyTable& table,
                                         std::span<const int> attributes);

// Plug-in mutual information (nats) of a two-attribute table, with
// 0 ln 0 = 0. Results within -1e-12 of zero are clamped to 0.
absl::StatusOr<double> MutualInformation(const ContingencyTable& table);

// I(child; all other attributes of the table), treating the remaining
// attributes as one joint variable.
absl::StatusOr<double> MutualInformationWithRest(const ContingencyTable& table,
                                                 int child);

// Upper bound on the change of plug-in mutual information when one record
// is added or removed, for a dataset of n records:
//   (2/n) ln((n+1)/2) + ((n-1)/n) ln((n+1)/(n-1)).
double MutualInformationSensitivity(size_t n);

// L1 distance between two tables over the same attributes.
double L1Distance(const ContingencyTable& a, const ContingencyTable& b);

nlohmann::json TableToJson(const ContingencyTable& table);
absl::StatusOr<ContingencyTable> TableFromJson(const nlohmann::json& json);

}  // namespace dpfair

#endif  // DPFAIR_MARGINALS_H_
