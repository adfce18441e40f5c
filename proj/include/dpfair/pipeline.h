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


// Benchmark harness: fit a synthesizer on the real training split, train a
// classifier on synthetic data, and evaluate it on real and on synthetic
// test data, over a grid of synthesizers, epsilons and rounds.

#ifndef DPFAIR_PIPELINE_H_
#define DPFAIR_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpfair/classifier.h"
#include "dpfair/data.h"
#include "dpfair/fairness.h"
#include "dpfair/synthesizer.h"
#include "json.hpp"

namespace dpfair {

struct ExperimentConfig {
  std::string recipe;  // recipe id or path
  std::string data;    // raw CSV path
  std::vector<std::string> synthesizers;
  std::vector<double> epsilons;
  int rounds = 10;
  uint64_t seed = 0;
  double split_fraction = 0.8;
  // Subset of {"real-test", "synthetic-test"}.
  std::vector<std::string> modes = {"real-test", "synthetic-test"};
  double delta = 0.0;
  // Sample synthetic test data from the training fit (one spend per round)
  // instead of fitting a second model.
  bool single_fit = true;
  int jobs = 1;
  SynthesizerOptions options;
  LogisticHyper classifier;

  bool evaluates_real() const;
  bool evaluates_synthetic() const;
  size_t num_cells() const {
    return synthesizers.size() * epsilons.size() * static_cast<size_t>(rounds);
  }
};

// Checks the grid: registered synthesizers, positive epsilons, rounds >= 1,
// split fraction, delta, jobs and evaluation modes.
absl::Status ValidateConfig(const ExperimentConfig& config);

// Reads a config object. Relative paths resolve against `base_dir`. Every
// validation problem is reported in one error.
absl::StatusOr<ExperimentConfig> ConfigFromJson(const nlohmann::json& json,
                                                const std::string& base_dir);
absl::StatusOr<ExperimentConfig> LoadConfig(const std::string& path);
nlohmann::json ConfigToJson(const ExperimentConfig& config);

// A path to an existing file is used as is. Otherwise `id` names
// <dir>/<id>.json under $DPFAIR_RECIPES_DIR, then the source tree's recipes.
absl::StatusOr<std::string> ResolveRecipePath(const std::string& id);

struct PreparedData {
  Recipe recipe;
  Dataset data;
  LoadReport report;
  // Present when the recipe asks for massaged labels.
  std::optional<MassageResult> massage;
};

// Loads and bins the CSV; massages labels when the recipe says so, ranking
// with a classifier trained on the binned data.
absl::StatusOr<PreparedData> PrepareDataset(const std::string& recipe_id,
                                            const std::string& csv_path,
                                            const LogisticHyper& ranker_hyper = {});

// The real test split, visible to a round only through this interface.
class HeldOutData {
 public:
  virtual ~HeldOutData() = default;
  virtual size_t size() const = 0;
  virtual const Dataset& Read() const = 0;
};

class InMemoryHeldOut : public HeldOutData {
 public:
  explicit InMemoryHeldOut(const Dataset& data) : data_(data) {}
  size_t size() const override { return data_.size(); }
  const Dataset& Read() const override { return data_; }

 private:
  const Dataset& data_;
};

enum class RoundStage { kFit, kSample, kTrain, kEvaluateSynthetic, kEvaluateReal };
const char* RoundStageName(RoundStage stage);

class RoundObserver {
 public:
  virtual ~RoundObserver() = default;
  virtual void OnStage(RoundStage stage) = 0;
};

struct RoundResult {
  std::string synthesizer;
  double epsilon = 0.0;
  int round = 0;
  uint64_t seed = 0;
  bool failed = false;
  std::string error;
  // Epsilon consumed by each synthesizer fit in the round.
  std::vector<double> epsilon_spent;
  // Predictions on the real test split were all one class.
  bool degenerate = false;
  // Training labels were all one class.
  bool constant_score = false;
  // Named metrics; nullopt marks a value that is undefined for this round.
  std::map<std::string, std::optional<double>> metrics;

  std::optional<double> metric(const std::string& name) const;
};

// Fits, samples, trains and evaluates one grid cell.
RoundResult RunRound(const Dataset& real_train, const HeldOutData& real_test,
                     const std::string& synthesizer, double epsilon, int round,
                     uint64_t seed, const ExperimentConfig& config,
                     RoundObserver* observer = nullptr);

// Classifier trained and evaluated on real data.
RoundResult RunBaseline(const Dataset& real_train, const Dataset& real_test,
                        const ExperimentConfig& config);

// Seed of grid cell (synthesizer, epsilon, round).
uint64_t CellSeed(uint64_t root, const std::string& synthesizer, double epsilon,
                  int round);

struct MetricSummary {
  std::optional<double> mean;
  std::optional<double> std;
  std::optional<double> stderr_;
  size_t count = 0;
  // Rounds where the metric was undefined.
  size_t flagged = 0;
};

struct CellSummary {
  std::string synthesizer;
  double epsilon = 0.0;
  size_t rounds = 0;
  size_t failed = 0;
  size_t degenerate_rounds = 0;
  // Largest |spent - epsilon| over the cell's fits.
  double budget_error = 0.0;
  std::map<std::string, MetricSummary> metrics;
};

struct BenchmarkReport {
  std::string dataset;
  ExperimentConfig config;
  size_t train_size = 0;
  size_t test_size = 0;
  RoundResult baseline;
  std::vector<RoundResult> rounds;
  std::vector<CellSummary> cells;
  size_t failed_rounds = 0;

  const CellSummary* cell(const std::string& synthesizer, double epsilon) const;
};

MetricSummary Summarize(const std::vector<std::optional<double>>& values);

// Aggregates rounds into per-(synthesizer, epsilon) summaries, in config
// order.
std::vector<CellSummary> Aggregate(const std::vector<RoundResult>& rounds,
                                   const ExperimentConfig& config);

// Runs the full grid on `data` (split once with the root seed).
absl::StatusOr<BenchmarkReport> RunBenchmarkOn(const Dataset& data,
                                               const std::string& dataset_name,
                                               const ExperimentConfig& config);
// Prepares the configured dataset, then runs the grid.
absl::StatusOr<BenchmarkReport> RunBenchmark(const ExperimentConfig& config);

inline constexpr const char* kRankTasks[] = {"train-utility", "eval-utility",
                                             "subgroup-accuracy", "dsp-fidelity",
                                             "deo-fidelity"};

// Orders the synthesizers run at `epsilon` for a task. Synthesizers that
// were degenerate in more than half their rounds come last; synthesizers
// with an undefined score come before them.
absl::StatusOr<std::vector<std::string>> RankSynthesizers(const BenchmarkReport& report,
                                                          const std::string& task,
                                                          double epsilon);

}  // namespace dpfair

#endif  // DPFAIR_PIPELINE_H_
