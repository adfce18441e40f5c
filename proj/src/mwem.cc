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

#include "dpfair/mwem.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "absl/strings/str_cat.h"

namespace dpfair {
namespace {

// Full-joint cell -> query cell, for a joint in schema attribute order.
std::vector<uint32_t> QueryCellMap(const std::vector<int>& cardinalities,
                                   const MarginalQuery& query) {
  size_t size = 1;
  for (int c : cardinalities) size *= static_cast<size_t>(c);
  std::vector<size_t> strides(cardinalities.size());
  size_t stride = 1;
  for (size_t a = cardinalities.size(); a-- > 0;) {
    strides[a] = stride;
    stride *= static_cast<size_t>(cardinalities[a]);
  }
  std::vector<uint32_t> map(size);
  for (size_t cell = 0; cell < size; ++cell) {
    size_t index = 0;
    for (int a : query.attributes()) {
      index = index * cardinalities[a] + (cell / strides[a]) % cardinalities[a];
    }
    map[cell] = static_cast<uint32_t>(index);
  }
  return map;
}

std::vector<double> Answer(const std::vector<double>& joint,
                           const std::vector<uint32_t>& map, size_t cells) {
  std::vector<double> out(cells, 0.0);
  for (size_t x = 0; x < joint.size(); ++x) out[map[x]] += joint[x];
  return out;
}

void Normalize(std::vector<double>& p) {
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
}

// Normalized model marginals for every workload query.
std::vector<ContingencyTable> ModelAnswers(const JointModel& model,
                                           const Workload& workload, Rng& rng,
                                           size_t sample_rows) {
  std::vector<ContingencyTable> out;
  if (const auto* joint = std::get_if<ExplicitJoint>(&model.body)) {
    for (const MarginalQuery& q : workload.queries()) {
      out.push_back(JointMarginal(*joint, q.attributes()));
    }
    return out;
  }
  const Dataset sample = Sample(model, sample_rows, rng);
  for (const MarginalQuery& q : workload.queries()) {
    out.push_back(ToDistribution(Marginal(sample, q)));
  }
  return out;
}

}  // namespace

absl::StatusOr<Workload> Workload::Create(std::vector<MarginalQuery> queries) {
  if (queries.empty()) return absl::InvalidArgumentError("workload is empty");
  std::set<MarginalQuery> seen;
  for (const MarginalQuery& q : queries) {
    if (!seen.insert(q).second) {
      return absl::InvalidArgumentError("workload repeats a query");
    }
  }
  return Workload(std::move(queries));
}

Workload Workload::Default(const Schema& schema) {
  const int d = schema.num_attributes();
  const int label = schema.label_attribute();
  std::vector<MarginalQuery> queries;
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      queries.push_back(*MarginalQuery::Create({a, b}, schema));
    }
  }
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      if (a == label || b == label) continue;
      queries.push_back(*MarginalQuery::Create({a, b, label}, schema));
    }
  }
  return Workload(std::move(queries));
}

absl::Status MwemConfig::Validate() const {
  if (iterations < 1) return absl::InvalidArgumentError("MWEM needs T >= 1");
  if (domain_cap < 2) return absl::InvalidArgumentError("MWEM domain cap must be >= 2");
  if (mw_repetitions < 1) {
    return absl::InvalidArgumentError("MWEM needs at least one update repetition");
  }
  if (answer_sample_rows < 1) {
    return absl::InvalidArgumentError("MWEM needs a positive answer sample size");
  }
  return absl::OkStatus();
}

absl::StatusOr<JointModel> MwemFit(const Dataset& data, const Workload& workload,
                                   PrivacyAccountant& accountant,
                                   const MwemConfig& config, Rng& rng) {
  if (absl::Status s = config.Validate(); !s.ok()) return s;
  if (data.empty()) return absl::InvalidArgumentError("MWEM needs data");
  if (workload.size() == 0) return absl::InvalidArgumentError("workload is empty");
  const Schema& schema = data.schema();
  for (const MarginalQuery& q : workload.queries()) {
    if (q.attributes().back() >= schema.num_attributes()) {
      return absl::InvalidArgumentError("workload query outside the schema");
    }
  }
  const double n = static_cast<double>(data.size());
  const NoiseMechanism mechanism{config.noise, 1.0};

  std::vector<ContingencyTable> exact;
  for (const MarginalQuery& q : workload.queries()) exact.push_back(Marginal(data, q));

  absl::StatusOr<std::vector<PrivacyAccountant::NodeId>> rounds =
      accountant.SplitEven(PrivacyAccountant::kRoot, config.iterations);
  if (!rounds.ok()) return rounds.status();

  const bool explicit_path = schema.DomainSize() <= config.domain_cap;
  IpfConfig ipf = config.ipf;
  ipf.domain_cap = config.domain_cap;
  JointModel model;
  model.schema = data.shared_schema();
  std::vector<double> joint;
  if (explicit_path) {
    joint.assign(static_cast<size_t>(schema.DomainSize()),
                 1.0 / static_cast<double>(schema.DomainSize()));
    model.kind = "explicit";
    model.body = ExplicitJoint{schema.cardinalities(), joint};
  } else {
    // Uniform start: every attribute independent and uniform.
    std::vector<ContingencyTable> uniform;
    for (int a = 0; a < schema.num_attributes(); ++a) {
      ContingencyTable t = ZeroTable({a}, schema);
      std::fill(t.cells.begin(), t.cells.end(), 1.0);
      uniform.push_back(std::move(t));
    }
    absl::StatusOr<JointModel> fitted = IpfFit(uniform, model.schema, ipf);
    if (!fitted.ok()) return fitted.status();
    model = *std::move(fitted);
  }

  std::vector<std::pair<size_t, ContingencyTable>> measurements;
  std::map<size_t, std::vector<uint32_t>> cell_maps;
  for (int t = 0; t < config.iterations; ++t) {
    const std::vector<double> halves = {0.5, 0.5};
    absl::StatusOr<std::vector<PrivacyAccountant::NodeId>> parts =
        accountant.Split((*rounds)[t], halves);
    if (!parts.ok()) return parts.status();

    // Select: score = L1 error of the model's count answer.
    std::vector<ContingencyTable> answers;
    if (explicit_path) {
      model.body = ExplicitJoint{schema.cardinalities(), joint};
    }
    {
      Rng answer_rng(rng.NextSeed());
      answers = ModelAnswers(model, workload, answer_rng, config.answer_sample_rows);
    }
    std::vector<double> scores(workload.size());
    for (size_t q = 0; q < workload.size(); ++q) {
      double error = 0.0;
      for (size_t c = 0; c < exact[q].cells.size(); ++c) {
        error += std::abs(n * answers[q].cells[c] - exact[q].cells[c]);
      }
      scores[q] = error;
    }
    absl::StatusOr<PrivacyBudget> select_budget =
        accountant.Consume((*parts)[0], absl::StrCat("mwem select ", t));
    if (!select_budget.ok()) return select_budget.status();
    absl::StatusOr<size_t> chosen =
        ExponentialChoice(scores, 1.0, select_budget->epsilon, rng);
    if (!chosen.ok()) return chosen.status();

    // Measure.
    absl::StatusOr<PrivacyBudget> measure_budget =
        accountant.Consume((*parts)[1], absl::StrCat("mwem measure ", t));
    if (!measure_budget.ok()) return measure_budget.status();
    absl::StatusOr<ContingencyTable> noisy = NoisyMarginal(
        data, workload.queries()[*chosen], *measure_budget, mechanism, rng);
    if (!noisy.ok()) return noisy.status();
    measurements.emplace_back(*chosen, *std::move(noisy));

    if (explicit_path) {
      if (!cell_maps.contains(*chosen)) {
        cell_maps[*chosen] =
            QueryCellMap(schema.cardinalities(), workload.queries()[*chosen]);
      }
      for (int rep = 0; rep < config.mw_repetitions; ++rep) {
        for (const auto& [q, measured] : measurements) {
          const std::vector<uint32_t>& map = cell_maps[q];
          const std::vector<double> answer = Answer(joint, map, measured.cells.size());
          std::vector<double> factor(answer.size());
          for (size_t c = 0; c < answer.size(); ++c) {
            factor[c] = std::exp((measured.cells[c] - n * answer[c]) / (2.0 * n));
          }
          for (size_t x = 0; x < joint.size(); ++x) joint[x] *= factor[map[x]];
          Normalize(joint);
        }
      }
    } else {
      std::vector<ContingencyTable> targets;
      std::vector<bool> covered(schema.num_attributes(), false);
      for (const auto& [q, measured] : measurements) {
        targets.push_back(measured);
        for (int a : measured.attributes) covered[a] = true;
      }
      for (int a = 0; a < schema.num_attributes(); ++a) {
        if (covered[a]) continue;
        ContingencyTable uniform = ZeroTable({a}, schema);
        std::fill(uniform.cells.begin(), uniform.cells.end(), 1.0);
        targets.push_back(std::move(uniform));
      }
      absl::StatusOr<JointModel> fitted = IpfFit(targets, model.schema, ipf);
      if (!fitted.ok()) return fitted.status();
      model = *std::move(fitted);
    }
  }
  if (explicit_path) {
    model.body = ExplicitJoint{schema.cardinalities(), std::move(joint)};
  }
  return model;
}

double MaxWorkloadError(const JointModel& model, const Dataset& data,
                        const Workload& workload, Rng& rng, size_t sample_rows) {
  const std::vector<ContingencyTable> answers =
      ModelAnswers(model, workload, rng, sample_rows);
  double worst = 0.0;
  for (size_t q = 0; q < workload.size(); ++q) {
    const ContingencyTable truth = ToDistribution(Marginal(data, workload.queries()[q]));
    worst = std::max(worst, L1Distance(answers[q], truth));
  }
  return worst;
}

}  // namespace dpfair
