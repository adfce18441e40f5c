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

#include "dpfair/joint_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "absl/strings/str_cat.h"

namespace dpfair {
namespace {

using nlohmann::json;

// Index into `row` by inverse CDF, skipping rounding past the last cell.
int SampleIndex(std::span<const double> row, double u) {
  double cumulative = 0.0;
  for (size_t k = 0; k < row.size(); ++k) {
    cumulative += row[k];
    if (u < cumulative) return static_cast<int>(k);
  }
  for (size_t k = row.size(); k-- > 0;) {
    if (row[k] > 0.0) return static_cast<int>(k);
  }
  return static_cast<int>(row.size()) - 1;
}

json ConditionalToJson(const ConditionalTable& c) {
  return {{"attribute", c.attribute},
          {"cardinality", c.cardinality},
          {"parents", c.parents},
          {"parent_cardinalities", c.parent_cardinalities},
          {"probabilities", c.probabilities}};
}

ConditionalTable ConditionalFromJson(const json& j) {
  ConditionalTable c;
  c.attribute = j.at("attribute").get<int>();
  c.cardinality = j.at("cardinality").get<int>();
  c.parents = j.at("parents").get<std::vector<int>>();
  c.parent_cardinalities = j.at("parent_cardinalities").get<std::vector<int>>();
  c.probabilities = j.at("probabilities").get<std::vector<double>>();
  return c;
}

json NetToJson(const BayesNet& net) {
  json conditionals = json::array();
  for (const ConditionalTable& c : net.conditionals) {
    conditionals.push_back(ConditionalToJson(c));
  }
  return {{"ordering", net.ordering}, {"conditionals", conditionals}};
}

BayesNet NetFromJson(const json& j) {
  BayesNet net;
  net.ordering = j.at("ordering").get<std::vector<int>>();
  for (const json& c : j.at("conditionals")) {
    net.conditionals.push_back(ConditionalFromJson(c));
  }
  return net;
}

}  // namespace

size_t ConditionalTable::RowOf(std::span<const int> record) const {
  size_t row = 0;
  for (size_t j = 0; j < parents.size(); ++j) {
    row = row * static_cast<size_t>(parent_cardinalities[j]) +
          static_cast<size_t>(record[parents[j]]);
  }
  return row;
}

absl::StatusOr<ConditionalTable> ConditionalFromTable(const ContingencyTable& table,
                                                      int child) {
  auto it = std::find(table.attributes.begin(), table.attributes.end(), child);
  if (it == table.attributes.end()) {
    return absl::InvalidArgumentError("child attribute is not in the table");
  }
  const size_t position = static_cast<size_t>(it - table.attributes.begin());
  ConditionalTable out;
  out.attribute = child;
  out.cardinality = table.cardinalities[position];
  for (size_t j = 0; j < table.attributes.size(); ++j) {
    if (j == position) continue;
    out.parents.push_back(table.attributes[j]);
    out.parent_cardinalities.push_back(table.cardinalities[j]);
  }
  const size_t child_card = static_cast<size_t>(out.cardinality);
  const size_t rows = table.cells.size() / child_card;
  out.probabilities.assign(table.cells.size(), 0.0);
  const size_t child_stride = table.Strides()[position];
  for (size_t cell = 0; cell < table.cells.size(); ++cell) {
    const size_t value = (cell / child_stride) % child_card;
    const size_t high = cell / (child_stride * child_card);
    const size_t low = cell % child_stride;
    const size_t row = high * child_stride + low;
    out.probabilities[row * child_card + value] = std::max(table.cells[cell], 0.0);
  }
  for (size_t r = 0; r < rows; ++r) {
    double* begin = out.probabilities.data() + r * child_card;
    const double sum = std::accumulate(begin, begin + child_card, 0.0);
    for (size_t k = 0; k < child_card; ++k) {
      begin[k] = sum > 0.0 ? begin[k] / sum : 1.0 / static_cast<double>(child_card);
    }
  }
  return out;
}

absl::Status ValidateBayesNet(const BayesNet& net, const Schema& schema) {
  const int d = schema.num_attributes();
  if (static_cast<int>(net.ordering.size()) != d ||
      static_cast<int>(net.conditionals.size()) != d) {
    return absl::InvalidArgumentError("network does not cover every attribute");
  }
  std::vector<int> position(d, -1);
  for (int i = 0; i < d; ++i) {
    const int a = net.ordering[i];
    if (a < 0 || a >= d || position[a] != -1) {
      return absl::InvalidArgumentError("ordering is not a permutation");
    }
    position[a] = i;
  }
  for (int a = 0; a < d; ++a) {
    const ConditionalTable& c = net.conditionals[a];
    if (c.attribute != a || c.cardinality != schema.cardinality(a) ||
        c.parents.size() != c.parent_cardinalities.size()) {
      return absl::InvalidArgumentError(absl::StrCat("bad table for attribute ", a));
    }
    size_t rows = 1;
    for (size_t j = 0; j < c.parents.size(); ++j) {
      const int p = c.parents[j];
      if (p < 0 || p >= d || position[p] >= position[a] ||
          c.parent_cardinalities[j] != schema.cardinality(p)) {
        return absl::InvalidArgumentError(
            absl::StrCat("parent ", p, " of attribute ", a, " is invalid"));
      }
      if (j > 0 && c.parents[j - 1] >= p) {
        return absl::InvalidArgumentError("parents must be ascending");
      }
      rows *= static_cast<size_t>(c.parent_cardinalities[j]);
    }
    if (c.probabilities.size() != rows * static_cast<size_t>(c.cardinality)) {
      return absl::InvalidArgumentError(
          absl::StrCat("table size mismatch for attribute ", a));
    }
    for (size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (double p : c.Row(r)) {
        if (!(p >= 0.0)) return absl::InvalidArgumentError("negative probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", r, " of attribute ", a, " sums to ", sum));
      }
    }
  }
  return absl::OkStatus();
}

bool IsSpanningTree(const SpanningTree& tree, int num_attributes) {
  if (num_attributes <= 0 || tree.root < 0 || tree.root >= num_attributes) {
    return false;
  }
  if (static_cast<int>(tree.edges.size()) != num_attributes - 1) return false;
  std::vector<std::vector<int>> adjacency(num_attributes);
  for (const auto& [u, v] : tree.edges) {
    if (u < 0 || v < 0 || u >= num_attributes || v >= num_attributes || u == v) {
      return false;
    }
    adjacency[u].push_back(v);
    adjacency[v].push_back(u);
  }
  std::vector<bool> seen(num_attributes, false);
  std::queue<int> frontier;
  frontier.push(tree.root);
  seen[tree.root] = true;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : adjacency[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        frontier.push(v);
      }
    }
  }
  // n-1 edges and connected implies acyclic.
  return reached == num_attributes;
}

const BayesNet* SamplingPlan(const JointModel& model) {
  if (const auto* net = std::get_if<BayesNet>(&model.body)) return net;
  if (const auto* tree = std::get_if<TreeModel>(&model.body)) return &tree->net;
  if (const auto* factored = std::get_if<FactoredModel>(&model.body)) {
    return &factored->plan;
  }
  return nullptr;
}

Dataset Sample(const JointModel& model, size_t n, Rng& rng) {
  const Schema& schema = *model.schema;
  const int d = schema.num_attributes();
  std::vector<int> cells(n * static_cast<size_t>(d), 0);
  if (const auto* joint = std::get_if<ExplicitJoint>(&model.body)) {
    std::vector<double> cdf(joint->probabilities.size());
    std::partial_sum(joint->probabilities.begin(), joint->probabilities.end(),
                     cdf.begin());
    const double total = cdf.empty() ? 0.0 : cdf.back();
    for (size_t i = 0; i < n; ++i) {
      const double u = rng.Uniform() * total;
      size_t cell = static_cast<size_t>(
          std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      cell = std::min(cell, cdf.size() - 1);
      while (cell > 0 && joint->probabilities[cell] <= 0.0) --cell;
      for (int a = d; a-- > 0;) {
        cells[i * d + a] = static_cast<int>(cell % joint->cardinalities[a]);
        cell /= joint->cardinalities[a];
      }
    }
  } else {
    const BayesNet& net = *SamplingPlan(model);
    for (size_t i = 0; i < n; ++i) {
      std::span<int> record(cells.data() + i * d, static_cast<size_t>(d));
      for (int a : net.ordering) {
        const ConditionalTable& c = net.conditionals[a];
        record[a] = SampleIndex(c.Row(c.RowOf(record)), rng.Uniform());
      }
    }
  }
  // Indices are in range by construction.
  return *Dataset::Create(model.schema, std::move(cells));
}

absl::StatusOr<ExplicitJoint> ToExplicit(const JointModel& model, size_t max_cells) {
  const Schema& schema = *model.schema;
  if (schema.DomainSize() > max_cells) {
    return absl::ResourceExhaustedError(
        absl::StrCat("domain of ", schema.DomainSize(), " cells exceeds ", max_cells));
  }
  if (const auto* joint = std::get_if<ExplicitJoint>(&model.body)) return *joint;
  const BayesNet& net = *SamplingPlan(model);
  ExplicitJoint out;
  out.cardinalities = schema.cardinalities();
  const size_t size = static_cast<size_t>(schema.DomainSize());
  out.probabilities.assign(size, 0.0);
  const int d = schema.num_attributes();
  std::vector<int> record(d, 0);
  for (size_t cell = 0; cell < size; ++cell) {
    size_t rest = cell;
    for (int a = d; a-- > 0;) {
      record[a] = static_cast<int>(rest % out.cardinalities[a]);
      rest /= out.cardinalities[a];
    }
    double p = 1.0;
    for (int a = 0; a < d && p > 0.0; ++a) {
      const ConditionalTable& c = net.conditionals[a];
      p *= c.Row(c.RowOf(record))[record[a]];
    }
    out.probabilities[cell] = p;
  }
  return out;
}

ContingencyTable JointMarginal(const ExplicitJoint& joint,
                               std::span<const int> attributes) {
  ContingencyTable full;
  full.attributes.resize(joint.cardinalities.size());
  std::iota(full.attributes.begin(), full.attributes.end(), 0);
  full.cardinalities = joint.cardinalities;
  full.cells = joint.probabilities;
  full.total = full.Sum();
  return *Project(full, attributes);
}

nlohmann::json ModelToJson(const JointModel& model) {
  json out = {{"format", "dpfair-model-v1"},
              {"kind", model.kind},
              {"schema", SchemaToJson(*model.schema)},
              {"fit_residual", model.fit_residual}};
  if (const auto* joint = std::get_if<ExplicitJoint>(&model.body)) {
    out["explicit"] = {{"cardinalities", joint->cardinalities},
                       {"probabilities", joint->probabilities}};
  } else if (const auto* factored = std::get_if<FactoredModel>(&model.body)) {
    json cliques = json::array();
    for (const ContingencyTable& t : factored->cliques) {
      cliques.push_back(TableToJson(t));
    }
    out["factored"] = {{"cliques", cliques},
                       {"plan", NetToJson(factored->plan)},
                       {"fit_residual", factored->fit_residual},
                       {"sweeps", factored->sweeps},
                       {"pruned_neighbors", factored->pruned_neighbors}};
  } else if (const auto* tree = std::get_if<TreeModel>(&model.body)) {
    json edges = json::array();
    for (const auto& [u, v] : tree->tree.edges) edges.push_back({u, v});
    out["tree"] = {{"root", tree->tree.root},
                   {"edges", edges},
                   {"net", NetToJson(tree->net)}};
  } else {
    out["bayesnet"] = NetToJson(std::get<BayesNet>(model.body));
  }
  return out;
}

absl::StatusOr<JointModel> ModelFromJson(const nlohmann::json& j) {
  JointModel model;
  try {
    if (j.at("format").get<std::string>() != "dpfair-model-v1") {
      return absl::InvalidArgumentError("unsupported model format");
    }
    absl::StatusOr<Schema> schema = SchemaFromJson(j.at("schema"));
    if (!schema.ok()) return schema.status();
    model.schema = std::make_shared<const Schema>(*std::move(schema));
    model.kind = j.at("kind").get<std::string>();
    model.fit_residual = j.at("fit_residual").get<double>();
    if (j.contains("explicit")) {
      ExplicitJoint joint;
      joint.cardinalities = j["explicit"].at("cardinalities").get<std::vector<int>>();
      joint.probabilities =
          j["explicit"].at("probabilities").get<std::vector<double>>();
      if (joint.cardinalities != model.schema->cardinalities() ||
          joint.probabilities.size() != model.schema->DomainSize()) {
        return absl::InvalidArgumentError("explicit joint does not match schema");
      }
      model.body = std::move(joint);
      return model;
    }
    if (j.contains("factored")) {
      const json& f = j["factored"];
      FactoredModel factored;
      for (const json& t : f.at("cliques")) {
        absl::StatusOr<ContingencyTable> table = TableFromJson(t);
        if (!table.ok()) return table.status();
        factored.cliques.push_back(*std::move(table));
      }
      factored.plan = NetFromJson(f.at("plan"));
      factored.fit_residual = f.at("fit_residual").get<double>();
      factored.sweeps = f.at("sweeps").get<int>();
      factored.pruned_neighbors = f.at("pruned_neighbors").get<int>();
      model.body = std::move(factored);
    } else if (j.contains("tree")) {
      const json& t = j["tree"];
      TreeModel tree;
      tree.tree.root = t.at("root").get<int>();
      for (const json& e : t.at("edges")) {
        tree.tree.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
      }
      tree.net = NetFromJson(t.at("net"));
      if (!IsSpanningTree(tree.tree, model.schema->num_attributes())) {
        return absl::InvalidArgumentError("tree edges do not span the schema");
      }
      model.body = std::move(tree);
    } else {
      model.body = NetFromJson(j.at("bayesnet"));
    }
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("bad model json: ", e.what()));
  }
  if (absl::Status s = ValidateBayesNet(*SamplingPlan(model), *model.schema);
      !s.ok()) {
    return s;
  }
  return model;
}

}  // namespace dpfair
