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

#include "dpfair/pipeline.h"

#include <string>
#include <vector>

#include "dpfair/report.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.h"

namespace dpfair {
namespace {

using ::dpfair::testing::MakeDataset;
using ::dpfair::testing::MakeSchema;
using ::testing::ElementsAre;
using ::testing::HasSubstr;

// Group, three features and a label that depends on features and group.
Dataset ToyData(size_t n, uint64_t seed) {
  auto schema = MakeSchema({2, 3, 2, 4, 2}, 0, 4);
  Rng rng(seed);
  std::vector<std::vector<int>> rows;
  for (size_t i = 0; i < n; ++i) {
    const int g = rng.Uniform() < 0.6;
    const int a = static_cast<int>(rng.Index(3));
    const int b = rng.Uniform() < (g ? 0.6 : 0.3);
    const int c = static_cast<int>(rng.Index(4));
    const double p = 0.1 + 0.25 * a + 0.2 * b + 0.1 * (c == 3) + 0.1 * g;
    rows.push_back({g, a, b, c, rng.Uniform() < p});
  }
  return MakeDataset(schema, rows);
}

ExperimentConfig SmallConfig() {
  ExperimentConfig config;
  config.synthesizers = {"mwem", "independent"};
  config.epsilons = {1.0, 5.0};
  config.rounds = 2;
  config.seed = 17;
  config.options.mwem.iterations = 5;
  config.classifier.epochs = 100;
  return config;
}

class TracingHeldOut : public HeldOutData, public RoundObserver {
 public:
  explicit TracingHeldOut(const Dataset& data) : data_(data) {}
  size_t size() const override { return data_.size(); }
  const Dataset& Read() const override {
    reads_.push_back(stage_);
    return data_;
  }
  void OnStage(RoundStage stage) override {
    stage_ = stage;
    stages_.push_back(stage);
  }
  const std::vector<RoundStage>& reads() const { return reads_; }
  const std::vector<RoundStage>& stages() const { return stages_; }

 private:
  const Dataset& data_;
  RoundStage stage_ = RoundStage::kFit;
  mutable std::vector<RoundStage> reads_;
  std::vector<RoundStage> stages_;
};

TEST(ConfigTest, ParsesAndValidates) {
  const nlohmann::json good = nlohmann::json::parse(R"({
    "recipe": "compas", "data": "raw.csv", "synthesizers": ["mwem", "mst"],
    "epsilons": [0.5, 1.0], "rounds": 3, "seed": 9, "modes": ["real-test"],
    "synthesizer_options": {"mwem_iterations": 4}})");
  absl::StatusOr<ExperimentConfig> config = ConfigFromJson(good, "/base");
  ASSERT_TRUE(config.ok()) << config.status();
  EXPECT_EQ(config->data, "/base/raw.csv");
  EXPECT_EQ(config->num_cells(), 12u);
  EXPECT_TRUE(config->evaluates_real());
  EXPECT_FALSE(config->evaluates_synthetic());
  EXPECT_EQ(config->options.mwem.iterations, 4);
  absl::StatusOr<ExperimentConfig> back = ConfigFromJson(ConfigToJson(*config), "/other");
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->data, "/base/raw.csv");
  EXPECT_EQ(back->epsilons, config->epsilons);
}

TEST(ConfigTest, CollectsEveryError) {
  nlohmann::json bad = nlohmann::json::parse(R"({
    "recipe": "compas", "data": "raw.csv", "synthesizers": ["mwem", "gan"],
    "epsilons": [0.0], "rounds": 0, "split_fraction": 1.0, "wat": 1})");
  absl::StatusOr<ExperimentConfig> config = ConfigFromJson(bad, ".");
  ASSERT_FALSE(config.ok());
  const std::string message(config.status().message());
  EXPECT_THAT(message, HasSubstr("rounds"));
  EXPECT_THAT(message, HasSubstr("gan"));
  EXPECT_THAT(message, HasSubstr("epsilon"));
  EXPECT_THAT(message, HasSubstr("split_fraction"));
  EXPECT_THAT(message, HasSubstr("wat"));

  nlohmann::json empty = nlohmann::json::parse(R"({
    "recipe": "compas", "data": "raw.csv", "synthesizers": [], "epsilons": [1]})");
  EXPECT_FALSE(ConfigFromJson(empty, ".").ok());
}

TEST(ConfigTest, ShippedConfigsLoad) {
  for (const char* name : {"compas-paper.cfg", "adult-paper.cfg", "compas-fair-paper.cfg"}) {
    absl::StatusOr<ExperimentConfig> config =
        LoadConfig(std::string(DPFAIR_DATA_DIR) + "/../configs/" + name);
    ASSERT_TRUE(config.ok()) << name << ": " << config.status();
    EXPECT_EQ(config->rounds, 10);
    EXPECT_THAT(config->epsilons, ElementsAre(0.5, 1.0, 5.0, 10.0));
    EXPECT_EQ(config->synthesizers.size(), 5u);
  }
}

TEST(RoundTest, NeverReadsRealTestOutsideRealEvaluation) {
  const Dataset data = ToyData(600, 1);
  auto split = *SplitTrainTest(data, 0.8, 2);
  const ExperimentConfig config = SmallConfig();
  for (const std::string& synth : {"mwem", "mst", "privbayes", "independent", "degenerate"}) {
    TracingHeldOut held_out(split.second);
    const RoundResult r = RunRound(split.first, held_out, synth, 1.0, 0, 5, config, &held_out);
    ASSERT_FALSE(r.failed) << r.error;
    EXPECT_THAT(held_out.reads(), ElementsAre(RoundStage::kEvaluateReal)) << synth;
    EXPECT_EQ(held_out.stages().back(), RoundStage::kEvaluateReal);
  }
}

TEST(RoundTest, DeterministicAndBudgetIsolated) {
  const Dataset data = ToyData(500, 3);
  auto split = *SplitTrainTest(data, 0.8, 4);
  ExperimentConfig config = SmallConfig();
  const InMemoryHeldOut held_out(split.second);
  const RoundResult a = RunRound(split.first, held_out, "mwem", 5.0, 1, 99, config);
  const RoundResult b = RunRound(split.first, held_out, "mwem", 5.0, 1, 99, config);
  EXPECT_EQ(a.metrics, b.metrics);
  EXPECT_THAT(a.epsilon_spent, ElementsAre(::testing::DoubleNear(5.0, 1e-9)));

  config.single_fit = false;
  const RoundResult c = RunRound(split.first, held_out, "mwem", 5.0, 1, 99, config);
  ASSERT_EQ(c.epsilon_spent.size(), 2u);
  for (double spent : c.epsilon_spent) EXPECT_NEAR(spent, 5.0, 1e-9);
}

TEST(RoundTest, DegenerateSynthesizer) {
  const Dataset data = ToyData(800, 5);
  auto split = *SplitTrainTest(data, 0.8, 6);
  const InMemoryHeldOut held_out(split.second);
  const RoundResult r =
      RunRound(split.first, held_out, "degenerate", 1.0, 0, 7, SmallConfig());
  ASSERT_FALSE(r.failed);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(*r.metric("dsp_r"), 0.0);
  EXPECT_EQ(*r.metric("deo_r"), 0.0);
  EXPECT_NEAR(*r.metric("auc_r"), 0.5, 0.1);
  // Synthetic test labels are constant, so AUC(S) is undefined.
  EXPECT_FALSE(r.metric("auc_s").has_value());
}

TEST(RoundTest, FailureIsRecorded) {
  const Dataset data = ToyData(200, 5);
  auto split = *SplitTrainTest(data, 0.8, 6);
  const InMemoryHeldOut held_out(split.second);
  ExperimentConfig config = SmallConfig();
  config.options.privbayes.k = 10;
  const RoundResult r = RunRound(split.first, held_out, "privbayes", 1.0, 0, 7, config);
  EXPECT_TRUE(r.failed);
  EXPECT_FALSE(r.error.empty());
}

TEST(BenchmarkTest, GridCardinality) {
  const Dataset data = ToyData(500, 7);
  absl::StatusOr<BenchmarkReport> report = RunBenchmarkOn(data, "toy", SmallConfig());
  ASSERT_TRUE(report.ok()) << report.status();
  EXPECT_EQ(report->rounds.size(), 8u);
  EXPECT_EQ(report->baseline.synthesizer, "real");
  EXPECT_TRUE(report->baseline.metric("auc_r").has_value());
  EXPECT_EQ(report->cells.size(), 4u);
  EXPECT_EQ(report->train_size, 400u);
  EXPECT_EQ(report->test_size, 100u);
  for (const CellSummary& cell : report->cells) {
    EXPECT_EQ(cell.rounds, 2u);
    EXPECT_LE(cell.budget_error, 1e-9);
  }
  ExperimentConfig zero = SmallConfig();
  zero.rounds = 0;
  EXPECT_FALSE(RunBenchmarkOn(data, "toy", zero).ok());
  ExperimentConfig none = SmallConfig();
  none.synthesizers.clear();
  EXPECT_FALSE(RunBenchmarkOn(data, "toy", none).ok());
}

TEST(BenchmarkTest, ReproducibleAcrossRunsAndJobCounts) {
  const Dataset data = ToyData(400, 8);
  ExperimentConfig config = SmallConfig();
  const BenchmarkReport a = *RunBenchmarkOn(data, "toy", config);
  const BenchmarkReport b = *RunBenchmarkOn(data, "toy", config);
  config.jobs = 3;
  const BenchmarkReport c = *RunBenchmarkOn(data, "toy", config);
  EXPECT_EQ(RoundsCsv(a), RoundsCsv(b));
  EXPECT_EQ(RoundsCsv(a), RoundsCsv(c));
  nlohmann::json ja = ReportJson(a), jc = ReportJson(c);
  ja["config"].erase("jobs");
  jc["config"].erase("jobs");
  EXPECT_EQ(ja.dump(), jc.dump());
  EXPECT_NE(CellSeed(1, "mwem", 1.0, 0), CellSeed(1, "mwem", 1.0, 1));
  EXPECT_NE(CellSeed(1, "mwem", 1.0, 0), CellSeed(1, "mst", 1.0, 0));
}

TEST(SummarizeTest, MeanStdAndFlags) {
  const MetricSummary s = Summarize({1.0, std::nullopt, 3.0, 5.0});
  EXPECT_EQ(s.count, 3u);
  EXPECT_EQ(s.flagged, 1u);
  EXPECT_DOUBLE_EQ(*s.mean, 3.0);
  EXPECT_DOUBLE_EQ(*s.std, 2.0);
  EXPECT_DOUBLE_EQ(*s.stderr_, 2.0 / std::sqrt(3.0));
  const MetricSummary none = Summarize({std::nullopt});
  EXPECT_FALSE(none.mean.has_value());
  EXPECT_EQ(none.flagged, 1u);
}

CellSummary Cell(const std::string& name, double auc_r, double auc_s, double dsp_r,
                 size_t degenerate_rounds = 0) {
  CellSummary cell;
  cell.synthesizer = name;
  cell.epsilon = 5.0;
  cell.rounds = 10;
  cell.degenerate_rounds = degenerate_rounds;
  cell.metrics["auc_r"].mean = auc_r;
  cell.metrics["auc_s"].mean = auc_s;
  cell.metrics["dsp_r"].mean = dsp_r;
  return cell;
}

TEST(RankTest, Tasks) {
  BenchmarkReport report;
  report.baseline.metrics["dsp_r"] = -0.2;
  report.cells = {Cell("b", 0.66, 0.66, -0.05), Cell("a", 0.85, 0.70, -0.18)};
  EXPECT_THAT(*RankSynthesizers(report, "train-utility", 5.0), ElementsAre("a", "b"));
  EXPECT_THAT(*RankSynthesizers(report, "eval-utility", 5.0), ElementsAre("b", "a"));
  EXPECT_THAT(*RankSynthesizers(report, "dsp-fidelity", 5.0), ElementsAre("a", "b"));
  // No accuracy metrics: both unscored, original order kept.
  EXPECT_THAT(*RankSynthesizers(report, "subgroup-accuracy", 5.0), ElementsAre("b", "a"));
  EXPECT_FALSE(RankSynthesizers(report, "speed", 5.0).ok());
  EXPECT_FALSE(RankSynthesizers(report, "train-utility", 1.0).ok());
}

TEST(RankTest, DegenerateAlwaysLast) {
  BenchmarkReport report;
  report.baseline.metrics["dsp_r"] = 0.0;
  report.cells = {Cell("degenerate", 0.99, 0.99, 0.0, 10), Cell("x", 0.6, 0.6, 0.3),
                  Cell("y", 0.7, 0.5, 0.2)};
  for (const char* task : kRankTasks) {
    EXPECT_EQ(RankSynthesizers(report, task, 5.0)->back(), "degenerate") << task;
  }
}

TEST(ReportTest, FilesHaveDocumentedShape) {
  const Dataset data = ToyData(300, 9);
  ExperimentConfig config = SmallConfig();
  config.synthesizers = {"independent", "degenerate"};
  config.epsilons = {1.0};
  const BenchmarkReport report = *RunBenchmarkOn(data, "toy", config);
  const std::string csv = RoundsCsv(report);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "dataset,synthesizer,epsilon,round,metric,value");
  EXPECT_THAT(csv, HasSubstr("toy,real,"));
  EXPECT_THAT(csv, HasSubstr(",auc_s,NA"));
  const nlohmann::json json = ReportJson(report);
  EXPECT_EQ(json["format"], "dpfair-report-v1");
  const std::string series = SeriesCsv(report, "auc_r");
  EXPECT_EQ(series.substr(0, series.find('\n')),
            "synthesizer,epsilon,mean,std,stderr,count,flagged");
  EXPECT_EQ(FormatValue(std::nullopt), "NA");
  EXPECT_EQ(FormatValue(0.5), "0.5");
}

}  // namespace
}  // namespace dpfair
