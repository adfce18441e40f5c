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

#include "dpfair/mechanisms.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace dpfair {
namespace {

constexpr double kWeightTolerance = 1e-9;

absl::Status CheckPositive(double value, std::string_view name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    return absl::InvalidArgumentError(
        absl::StrCat(std::string(name), " must be positive and finite, got ", value));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<PrivacyBudget> PrivacyBudget::Create(double epsilon, double delta) {
  if (absl::Status s = CheckPositive(epsilon, "epsilon"); !s.ok()) return s;
  if (!(delta >= 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must be in [0, 1), got ", delta));
  }
  return PrivacyBudget{epsilon, delta};
}

absl::StatusOr<std::vector<PrivacyBudget>> SplitBudget(
    const PrivacyBudget& parent, std::span<const double> weights) {
  if (weights.empty()) return absl::InvalidArgumentError("no split weights");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) return absl::InvalidArgumentError("negative split weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kWeightTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("split weights sum to ", sum, ", expected 1"));
  }
  std::vector<PrivacyBudget> children;
  children.reserve(weights.size());
  for (double w : weights) {
    children.push_back({w * parent.epsilon, w * parent.delta});
  }
  return children;
}

const char* NoiseKindName(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kLaplace:
      return "laplace";
    case NoiseKind::kGaussian:
      return "gaussian";
    case NoiseKind::kGeometric:
      return "geometric";
  }
  return "unknown";
}

absl::StatusOr<NoiseKind> ParseNoiseKind(std::string_view name) {
  if (name == "laplace") return NoiseKind::kLaplace;
  if (name == "gaussian") return NoiseKind::kGaussian;
  if (name == "geometric") return NoiseKind::kGeometric;
  return absl::InvalidArgumentError(absl::StrCat("unknown noise kind '", std::string(name), "'"));
}

absl::StatusOr<double> LaplaceScale(double sensitivity, double epsilon) {
  if (absl::Status s = CheckPositive(sensitivity, "sensitivity"); !s.ok()) return s;
  if (absl::Status s = CheckPositive(epsilon, "epsilon"); !s.ok()) return s;
  return sensitivity / epsilon;
}

absl::StatusOr<double> GaussianSigma(double sensitivity, double epsilon,
                                     double delta) {
  if (absl::Status s = CheckPositive(sensitivity, "sensitivity"); !s.ok()) return s;
  if (absl::Status s = CheckPositive(epsilon, "epsilon"); !s.ok()) return s;
  if (epsilon > 1.0) {
    return absl::InvalidArgumentError(
        "the classical Gaussian calibration requires epsilon <= 1");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        "Gaussian noise needs delta in (0, 1); use Laplace for delta = 0");
  }
  return sensitivity * std::sqrt(2.0 * std::log(1.25 / delta)) / epsilon;
}

absl::StatusOr<std::vector<double>> AddLaplaceNoise(std::span<const double> values,
                                                    double sensitivity,
                                                    double epsilon, Rng& rng) {
  absl::StatusOr<double> scale = LaplaceScale(sensitivity, epsilon);
  if (!scale.ok()) return scale.status();
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) {
    // Inverse CDF on u in (-1/2, 1/2).
    const double u = rng.UniformOpen() - 0.5;
    const double sign = u < 0 ? -1.0 : 1.0;
    v -= *scale * sign * std::log1p(-2.0 * std::abs(u));
  }
  return out;
}

absl::StatusOr<std::vector<double>> AddGaussianNoise(
    std::span<const double> values, double sensitivity, double epsilon,
    double delta, Rng& rng) {
  absl::StatusOr<double> sigma = GaussianSigma(sensitivity, epsilon, delta);
  if (!sigma.ok()) return sigma.status();
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v += *sigma * rng.Normal();
  return out;
}

absl::StatusOr<std::vector<double>> AddGeometricNoise(
    std::span<const double> values, double sensitivity, double epsilon, Rng& rng) {
  absl::StatusOr<double> scale = LaplaceScale(sensitivity, epsilon);
  if (!scale.ok()) return scale.status();
  // Difference of two iid geometric variables with success 1 - alpha.
  const double log_alpha = -1.0 / *scale;
  auto geometric = [&] {
    return std::floor(std::log(rng.UniformOpen()) / log_alpha);
  };
  std::vector<double> out(values.begin(), values.end());
  for (double& v : out) v += geometric() - geometric();
  return out;
}

absl::StatusOr<std::vector<double>> AddNoise(std::span<const double> values,
                                             const NoiseMechanism& mechanism,
                                             const PrivacyBudget& budget,
                                             Rng& rng) {
  switch (mechanism.kind) {
    case NoiseKind::kLaplace:
      return AddLaplaceNoise(values, mechanism.sensitivity, budget.epsilon, rng);
    case NoiseKind::kGaussian:
      return AddGaussianNoise(values, mechanism.sensitivity, budget.epsilon,
                              budget.delta, rng);
    case NoiseKind::kGeometric:
      return AddGeometricNoise(values, mechanism.sensitivity, budget.epsilon, rng);
  }
  return absl::InvalidArgumentError("unknown mechanism");
}

absl::StatusOr<std::vector<double>> ExponentialProbabilities(
    std::span<const double> scores, double sensitivity, double epsilon) {
  if (scores.empty()) return absl::InvalidArgumentError("empty score vector");
  if (absl::Status s = CheckPositive(sensitivity, "sensitivity"); !s.ok()) return s;
  if (absl::Status s = CheckPositive(epsilon, "epsilon"); !s.ok()) return s;
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> p(scores.size());
  double total = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp(epsilon * (scores[i] - top) / (2.0 * sensitivity));
    total += p[i];
  }
  for (double& x : p) x /= total;
  return p;
}

absl::StatusOr<size_t> ExponentialChoice(std::span<const double> scores,
                                         double sensitivity, double epsilon,
                                         Rng& rng) {
  absl::StatusOr<std::vector<double>> p =
      ExponentialProbabilities(scores, sensitivity, epsilon);
  if (!p.ok()) return p.status();
  const double u = rng.Uniform();
  double cumulative = 0.0;
  for (size_t i = 0; i < p->size(); ++i) {
    cumulative += (*p)[i];
    if (u < cumulative) return i;
  }
  // Rounding left u above the final cumulative sum; take the last index
  // with nonzero mass.
  for (size_t i = p->size(); i-- > 0;) {
    if ((*p)[i] > 0) return i;
  }
  return p->size() - 1;
}

PrivacyAccountant::PrivacyAccountant(PrivacyBudget total) {
  nodes_.push_back(Node{total, State::kOpen, "root"});
}

absl::StatusOr<std::vector<PrivacyAccountant::NodeId>> PrivacyAccountant::Split(
    NodeId parent, std::span<const double> weights) {
  if (parent >= nodes_.size()) return absl::NotFoundError("unknown budget node");
  if (nodes_[parent].state != State::kOpen) {
    return absl::FailedPreconditionError("budget node already split or spent");
  }
  absl::StatusOr<std::vector<PrivacyBudget>> children =
      SplitBudget(nodes_[parent].budget, weights);
  if (!children.ok()) return children.status();
  nodes_[parent].state = State::kSplit;
  std::vector<NodeId> ids;
  for (const PrivacyBudget& child : *children) {
    ids.push_back(nodes_.size());
    nodes_.push_back(Node{child, State::kOpen, ""});
  }
  return ids;
}

absl::StatusOr<std::vector<PrivacyAccountant::NodeId>>
PrivacyAccountant::SplitEven(NodeId parent, size_t count) {
  if (count == 0) return absl::InvalidArgumentError("cannot split into zero parts");
  const std::vector<double> weights(count, 1.0 / static_cast<double>(count));
  return Split(parent, weights);
}

absl::StatusOr<PrivacyBudget> PrivacyAccountant::Consume(NodeId id,
                                                         std::string purpose) {
  if (id >= nodes_.size()) return absl::NotFoundError("unknown budget node");
  Node& node = nodes_[id];
  if (node.state == State::kConsumed) {
    return absl::FailedPreconditionError(
        absl::StrCat("budget already consumed by '", node.purpose, "'"));
  }
  if (node.state == State::kSplit) {
    return absl::FailedPreconditionError("cannot consume a node that was split");
  }
  node.state = State::kConsumed;
  node.purpose = std::move(purpose);
  return node.budget;
}

double PrivacyAccountant::SpentEpsilon() const {
  double total = 0.0;
  for (const Node& node : nodes_) {
    if (node.state == State::kConsumed) total += node.budget.epsilon;
  }
  return total;
}

double PrivacyAccountant::SpentDelta() const {
  double total = 0.0;
  for (const Node& node : nodes_) {
    if (node.state == State::kConsumed) total += node.budget.delta;
  }
  return total;
}

size_t PrivacyAccountant::num_consumed() const {
  return static_cast<size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) {
    return n.state == State::kConsumed;
  }));
}

}  // namespace dpfair
