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

#include "dpfair/marginals.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"

namespace dpfair {

absl::StatusOr<MarginalQuery> MarginalQuery::Create(std::vector<int> attributes,
                                                    const Schema& schema) {
  if (attributes.empty() || attributes.size() > kMaxQueryArity) {
    return absl::InvalidArgumentError(
        absl::StrCat("marginal query needs 1 to ", kMaxQueryArity,
                     " attributes, got ", attributes.size()));
  }
  std::sort(attributes.begin(), attributes.end());
  if (std::adjacent_find(attributes.begin(), attributes.end()) != attributes.end()) {
    return absl::InvalidArgumentError("marginal query repeats an attribute");
  }
  if (attributes.front() < 0 || attributes.back() >= schema.num_attributes()) {
    return absl::InvalidArgumentError("marginal query attribute out of range");
  }
  return MarginalQuery(std::move(attributes));
}

bool MarginalQuery::Contains(int attribute) const {
  return std::binary_search(attributes_.begin(), attributes_.end(), attribute);
}

std::vector<size_t> ContingencyTable::Strides() const {
  std::vector<size_t> strides(attributes.size());
  size_t stride = 1;
  for (size_t j = attributes.size(); j-- > 0;) {
    strides[j] = stride;
    stride *= static_cast<size_t>(cardinalities[j]);
  }
  return strides;
}

size_t ContingencyTable::CellOf(std::span<const int> record) const {
  size_t index = 0;
  for (size_t j = 0; j < attributes.size(); ++j) {
    index = index * static_cast<size_t>(cardinalities[j]) +
            static_cast<size_t>(record[attributes[j]]);
  }
  return index;
}

double ContingencyTable::Sum() const {
  return std::accumulate(cells.begin(), cells.end(), 0.0);
}

ContingencyTable ZeroTable(std::vector<int> attributes, const Schema& schema) {
  ContingencyTable table;
  size_t size = 1;
  for (int a : attributes) {
    table.cardinalities.push_back(schema.cardinality(a));
    size *= static_cast<size_t>(schema.cardinality(a));
  }
  table.attributes = std::move(attributes);
  table.cells.assign(size, 0.0);
  return table;
}

ContingencyTable CountTable(const Dataset& data, std::vector<int> attributes) {
  ContingencyTable table = ZeroTable(std::move(attributes), data.schema());
  for (size_t i = 0; i < data.size(); ++i) {
    table.cells[table.CellOf(data.row(i))] += 1.0;
  }
  table.total = static_cast<double>(data.size());
  return table;
}

ContingencyTable Marginal(const Dataset& data, const MarginalQuery& query) {
  return CountTable(data, query.attributes());
}

absl::StatusOr<ContingencyTable> NoisyMarginal(const Dataset& data,
                                               const MarginalQuery& query,
                                               const PrivacyBudget& budget,
                                               const NoiseMechanism& mechanism,
                                               Rng& rng) {
  if (query.attributes().back() >= data.schema().num_attributes()) {
    return absl::InvalidArgumentError("query does not fit the dataset schema");
  }
  ContingencyTable table = Marginal(data, query);
  absl::StatusOr<std::vector<double>> noisy =
      AddNoise(table.cells, mechanism, budget, rng);
  if (!noisy.ok()) return noisy.status();
  table.cells = *std::move(noisy);
  table.total = table.Sum();
  return table;
}

ContingencyTable ToDistribution(const ContingencyTable& table) {
  ContingencyTable out = table;
  double sum = 0.0;
  for (double& c : out.cells) {
    c = std::max(c, 0.0);
    sum += c;
  }
  if (sum > 0.0) {
    for (double& c : out.cells) c /= sum;
  } else {
    std::fill(out.cells.begin(), out.cells.end(),
              1.0 / static_cast<double>(out.cells.size()));
  }
  out.total = 1.0;
  return out;
}

absl::StatusOr<ContingencyTable> Project(const ContingencyTable& table,
                                         std::span<const int> attributes) {
  std::vector<int> positions;
  for (int a : attributes) {
    auto it = std::find(table.attributes.begin(), table.attributes.end(), a);
    if (it == table.attributes.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("attribute ", a, " is not in the table"));
    }
    positions.push_back(static_cast<int>(it - table.attributes.begin()));
  }
  if (!std::is_sorted(attributes.begin(), attributes.end()) ||
      std::adjacent_find(attributes.begin(), attributes.end()) != attributes.end()) {
    return absl::InvalidArgumentError("projection attributes must be sorted and unique");
  }
  ContingencyTable out;
  out.attributes.assign(attributes.begin(), attributes.end());
  size_t size = 1;
  for (int p : positions) {
    out.cardinalities.push_back(table.cardinalities[p]);
    size *= static_cast<size_t>(table.cardinalities[p]);
  }
  out.cells.assign(size, 0.0);
  const std::vector<size_t> strides = table.Strides();
  for (size_t cell = 0; cell < table.cells.size(); ++cell) {
    size_t target = 0;
    for (int p : positions) {
      const size_t value = (cell / strides[p]) % table.cardinalities[p];
      target = target * table.cardinalities[p] + value;
    }
    out.cells[target] += table.cells[cell];
  }
  out.total = out.Sum();
  return out;
}

absl::StatusOr<double> MutualInformationWithRest(const ContingencyTable& table,
                                                 int child) {
  auto it = std::find(table.attributes.begin(), table.attributes.end(), child);
  if (it == table.attributes.end()) {
    return absl::InvalidArgumentError("child attribute is not in the table");
  }
  if (table.attributes.size() < 2) {
    return absl::InvalidArgumentError("mutual information needs two variables");
  }
  const size_t position = static_cast<size_t>(it - table.attributes.begin());
  const std::vector<size_t> strides = table.Strides();
  const size_t child_card = static_cast<size_t>(table.cardinalities[position]);
  const size_t child_stride = strides[position];
  const size_t rest_card = table.cells.size() / child_card;

  // Index of the "rest" configuration: drop the child digit from the cell.
  auto rest_index = [&](size_t cell) {
    const size_t high = cell / (child_stride * child_card);
    const size_t low = cell % child_stride;
    return high * child_stride + low;
  };

  std::vector<double> p_child(child_card, 0.0);
  std::vector<double> p_rest(rest_card, 0.0);
  double total = 0.0;
  for (size_t cell = 0; cell < table.cells.size(); ++cell) {
    const double c = table.cells[cell];
    if (c < 0) return absl::InvalidArgumentError("negative count in MI table");
    p_child[(cell / child_stride) % child_card] += c;
    p_rest[rest_index(cell)] += c;
    total += c;
  }
  if (!(total > 0.0)) return absl::InvalidArgumentError("MI table has zero total");
  double mi = 0.0;
  for (size_t cell = 0; cell < table.cells.size(); ++cell) {
    const double c = table.cells[cell];
    if (c <= 0.0) continue;
    const double joint = c / total;
    const double a = p_child[(cell / child_stride) % child_card] / total;
    const double b = p_rest[rest_index(cell)] / total;
    mi += joint * std::log(joint / (a * b));
  }
  if (mi < 0.0 && mi > -1e-12) mi = 0.0;
  return std::max(mi, 0.0);
}

absl::StatusOr<double> MutualInformation(const ContingencyTable& table) {
  if (table.attributes.size() != 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "mutual information needs a 2-way table, got ", table.attributes.size(),
        " attributes"));
  }
  return MutualInformationWithRest(table, table.attributes[0]);
}

double MutualInformationSensitivity(size_t n) {
  if (n <= 1) return std::log(2.0);
  const double x = static_cast<double>(n);
  return (2.0 / x) * std::log((x + 1.0) / 2.0) +
         ((x - 1.0) / x) * std::log((x + 1.0) / (x - 1.0));
}

double L1Distance(const ContingencyTable& a, const ContingencyTable& b) {
  double d = 0.0;
  for (size_t i = 0; i < a.cells.size(); ++i) d += std::abs(a.cells[i] - b.cells[i]);
  return d;
}

nlohmann::json TableToJson(const ContingencyTable& table) {
  return {{"attributes", table.attributes},
          {"cardinalities", table.cardinalities},
          {"cells", table.cells},
          {"total", table.total}};
}

absl::StatusOr<ContingencyTable> TableFromJson(const nlohmann::json& json) {
  ContingencyTable table;
  try {
    table.attributes = json.at("attributes").get<std::vector<int>>();
    table.cardinalities = json.at("cardinalities").get<std::vector<int>>();
    table.cells = json.at("cells").get<std::vector<double>>();
    table.total = json.at("total").get<double>();
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad table json: ", e.what()));
  }
  size_t size = 1;
  for (int d : table.cardinalities) size *= static_cast<size_t>(d);
  if (table.attributes.size() != table.cardinalities.size() ||
      size != table.cells.size()) {
    return absl::InvalidArgumentError("table shape does not match its cells");
  }
  return table;
}

}  // namespace dpfair
