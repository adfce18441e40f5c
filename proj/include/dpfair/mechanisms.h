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

// Noise mechanisms, the exponential mechanism, and a privacy budget ledger
// with basic (linear) composition.

#ifndef DPFAIR_MECHANISMS_H_
#define DPFAIR_MECHANISMS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpfair/random.h"

namespace dpfair {

inline constexpr double kDefaultDelta = 1e-5;

struct PrivacyBudget {
  double epsilon = 0.0;
  double delta = 0.0;

  // epsilon > 0 and delta in [0, 1).
  static absl::StatusOr<PrivacyBudget> Create(double epsilon, double delta = 0.0);
};

// Basic composition: child i gets weights[i] of both epsilon and delta.
// Weights must be nonnegative and sum to 1 within 1e-9.
absl::StatusOr<std::vector<PrivacyBudget>> SplitBudget(
    const PrivacyBudget& parent, std::span<const double> weights);

enum class NoiseKind { kLaplace, kGaussian, kGeometric };

struct NoiseMechanism {
  NoiseKind kind = NoiseKind::kLaplace;
  double sensitivity = 1.0;
};

const char* NoiseKindName(NoiseKind kind);
absl::StatusOr<NoiseKind> ParseNoiseKind(std::string_view name);

// b = sensitivity / epsilon.
absl::StatusOr<double> LaplaceScale(double sensitivity, double epsilon);

// Classical calibration sigma = sensitivity * sqrt(2 ln(1.25 / delta)) / epsilon,
// valid for epsilon in (0, 1] and delta in (0, 1).
absl::StatusOr<double> GaussianSigma(double sensitivity, double epsilon,
                                     double delta);

absl::StatusOr<std::vector<double>> AddLaplaceNoise(std::span<const double> values,
                                                    double sensitivity,
                                                    double epsilon, Rng& rng);

absl::StatusOr<std::vector<double>> AddGaussianNoise(
    std::span<const double> values, double sensitivity, double epsilon,
    double delta, Rng& rng);

// Two-sided geometric (discrete Laplace) noise with
// P(k) proportional to exp(-epsilon |k| / sensitivity).
absl::StatusOr<std::vector<double>> AddGeometricNoise(
    std::span<const double> values, double sensitivity, double epsilon, Rng& rng);

absl::StatusOr<std::vector<double>> AddNoise(std::span<const double> values,
                                             const NoiseMechanism& mechanism,
                                             const PrivacyBudget& budget, Rng& rng);

// Selection probabilities exp(eps * s_i / (2 * sensitivity)), normalized with
// the maximum score subtracted first.
absl::StatusOr<std::vector<double>> ExponentialProbabilities(
    std::span<const double> scores, double sensitivity, double epsilon);

// Samples an index from ExponentialProbabilities.
absl::StatusOr<size_t> ExponentialChoice(std::span<const double> scores,
                                         double sensitivity, double epsilon,
                                         Rng& rng);

// Single-writer ledger of budget nodes. The root holds the total budget;
// Split turns a node into children, and Consume marks a leaf as spent.
// A node can be split or consumed, never both, and never twice, so the
// consumed epsilon can never exceed the root.
class PrivacyAccountant {
 public:
  using NodeId = size_t;
  static constexpr NodeId kRoot = 0;

  explicit PrivacyAccountant(PrivacyBudget total);

  const PrivacyBudget& total() const { return nodes_[kRoot].budget; }
  const PrivacyBudget& budget(NodeId id) const { return nodes_[id].budget; }

  absl::StatusOr<std::vector<NodeId>> Split(NodeId parent,
                                            std::span<const double> weights);
  // Splits into `count` equal children.
  absl::StatusOr<std::vector<NodeId>> SplitEven(NodeId parent, size_t count);

  // Returns the node's budget and records it as spent under `purpose`.
  absl::StatusOr<PrivacyBudget> Consume(NodeId id, std::string purpose);

  double SpentEpsilon() const;
  double SpentDelta() const;
  size_t num_consumed() const;

 private:
  enum class State { kOpen, kSplit, kConsumed };
  struct Node {
    PrivacyBudget budget;
    State state = State::kOpen;
    std::string purpose;
  };

  std::vector<Node> nodes_;
};

}  // namespace dpfair

#endif  // DPFAIR_MECHANISMS_H_
