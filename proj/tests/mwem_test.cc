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

#include <cmath>
#include <numeric>
#include <type_traits>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace dpfair {
namespace {

using ::dpfair::testing::ChainData;
using ::dpfair::testing::Histogram;
using ::dpfair::testing::MakeDataset;
using ::dpfair::testing::MakeSchema;
using ::dpfair::testing::TotalVariation;

// Sampling is post-processing: it sees the model and a generator only.
static_assert(std::is_same_v<decltype(&Sample), Dataset (*)(const JointModel&, size_t, Rng&)>);

absl::StatusOr<JointModel> Fit(const Dataset& data, const Workload& workload, double eps,
                               const MwemConfig& config, uint64_t seed,
                               double* spent = nullptr) {
  PrivacyAccountant accountant(*PrivacyBudget::Create(eps));
  Rng rng(seed);
  absl::StatusOr<JointModel> model = MwemFit(data, workload, accountant, config, rng);
  if (spent != nullptr) *spent = accountant.SpentEpsilon();
  return model;
}

Dataset UniformData(int d, int copies) {
  auto schema = MakeSchema(std::vector<int>(d, 2));
  std::vector<std::vector<int>> rows;
  for (int c = 0; c < copies; ++c) {
    for (int x = 0; x < (1 << d); ++x) {
      std::vector<int> row(d);
      for (int a = 0; a < d; ++a) row[a] = (x >> (d - 1 - a)) & 1;
      rows.push_back(row);
    }
  }
  return MakeDataset(schema, rows);
}

TEST(WorkloadTest, DefaultShape) {
  auto schema = MakeSchema({2, 3, 2, 4, 2});
  const Workload w = Workload::Default(*schema);
  // 10 pairs plus C(4, 2) triples containing the label.
  EXPECT_EQ(w.size(), 16u);
  for (const MarginalQuery& q : w.queries()) {
    if (q.arity() == 3) EXPECT_TRUE(q.Contains(4));
  }
  EXPECT_TRUE(Workload::Create(w.queries()).ok());
}

TEST(WorkloadTest, Errors) {
  auto schema = MakeSchema({2, 2});
  EXPECT_FALSE(Workload::Create({}).ok());
  const MarginalQuery q = *MarginalQuery::Create({0}, *schema);
  EXPECT_FALSE(Workload::Create({q, q}).ok());
}

TEST(MwemConfigTest, Validate) {
  MwemConfig config;
  EXPECT_TRUE(config.Validate().ok());
  config.iterations = 0;
  EXPECT_FALSE(config.Validate().ok());
  config = {};
  config.domain_cap = 1;
  EXPECT_FALSE(config.Validate().ok());
}

TEST(MwemTest, HugeEpsilonRecoversOneWayMarginals) {
  auto schema = MakeSchema({2, 2});
  const Dataset data = MakeDataset(
      schema, {{0, 0}, {0, 0}, {0, 1}, {1, 1}, {0, 1}, {0, 0}, {0, 1}, {1, 0}, {0, 1}, {0, 1}});
  const Workload w = *Workload::Create(
      {*MarginalQuery::Create({0}, *schema), *MarginalQuery::Create({1}, *schema)});
  MwemConfig config;
  config.iterations = 20;
  absl::StatusOr<JointModel> model = Fit(data, w, 1e6, config, 3);
  ASSERT_TRUE(model.ok()) << model.status();
  const ExplicitJoint& joint = std::get<ExplicitJoint>(model->body);
  for (int a = 0; a < 2; ++a) {
    const std::vector<int> attrs = {a};
    EXPECT_LT(TotalVariation(JointMarginal(joint, attrs).cells, Histogram(data, attrs)), 0.01);
  }
}

TEST(MwemTest, UniformDataStaysUniform) {
  const Dataset data = UniformData(4, 500);
  const Workload w = Workload::Default(data.schema());
  const std::vector<double> uniform(16, 1.0 / 16);
  for (double eps : {1.0, 5.0, 100.0}) {
    absl::StatusOr<JointModel> model = Fit(data, w, eps, MwemConfig{}, 11);
    ASSERT_TRUE(model.ok());
    EXPECT_LT(TotalVariation(std::get<ExplicitJoint>(model->body).probabilities, uniform),
              0.05)
        << "eps " << eps;
  }
}

TEST(MwemTest, SpendsExactlyEpsilon) {
  const Dataset data = ChainData(5, 1'000, 0.8, 1);
  const Workload w = Workload::Default(data.schema());
  for (double eps : {0.5, 1.0, 5.0, 10.0}) {
    for (size_t cap : {size_t{1'000'000}, size_t{8}}) {
      MwemConfig config;
      config.iterations = 7;
      config.domain_cap = cap;
      config.answer_sample_rows = 2'000;
      double spent = 0.0;
      ASSERT_TRUE(Fit(data, w, eps, config, 2, &spent).ok());
      EXPECT_NEAR(spent, eps, 1e-9);
    }
  }
}

TEST(MwemTest, ExplicitJointStaysNormalized) {
  const Dataset data = ChainData(5, 800, 0.8, 4);
  const Workload w = Workload::Default(data.schema());
  for (int t = 1; t <= 6; ++t) {
    MwemConfig config;
    config.iterations = t;
    absl::StatusOr<JointModel> model = Fit(data, w, 1.0, config, 100 + t);
    ASSERT_TRUE(model.ok());
    const std::vector<double>& p = std::get<ExplicitJoint>(model->body).probabilities;
    double sum = 0.0;
    for (double v : p) {
      ASSERT_GE(v, 0.0);
      sum += v;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9) << "T = " << t;
  }
}

TEST(MwemTest, MoreBudgetMeansLessWorkloadError) {
  const Dataset data = ChainData(5, 2'000, 0.85, 9);
  const Workload w = Workload::Default(data.schema());
  double low = 0.0, high = 0.0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng eval(seed);
    low += MaxWorkloadError(*Fit(data, w, 0.5, MwemConfig{}, seed), data, w, eval);
    high += MaxWorkloadError(*Fit(data, w, 10.0, MwemConfig{}, seed), data, w, eval);
  }
  EXPECT_LE(high / 20, low / 20);
}

TEST(MwemTest, FactoredPathLearnsChain) {
  const Dataset data = ChainData(8, 5'000, 0.9, 12);
  const Workload w = Workload::Default(data.schema());
  MwemConfig config;
  config.domain_cap = 64;
  config.answer_sample_rows = 5'000;
  absl::StatusOr<JointModel> model = Fit(data, w, 1e4, config, 5);
  ASSERT_TRUE(model.ok()) << model.status();
  EXPECT_EQ(model->kind, "factored");
  const FactoredModel& factored = std::get<FactoredModel>(model->body);
  EXPECT_TRUE(ValidateBayesNet(factored.plan, data.schema()).ok());
  Rng rng(1);
  // Adjacent pairs are what carries the signal in a chain.
  const Dataset sample = Sample(*model, 50'000, rng);
  double worst = 0.0;
  for (int a = 0; a + 1 < 8; ++a) {
    worst = std::max(worst, TotalVariation(Histogram(sample, {a, a + 1}),
                                           Histogram(data, {a, a + 1})));
  }
  EXPECT_LT(worst, 0.1);
}

TEST(MwemTest, Deterministic) {
  const Dataset data = ChainData(4, 500, 0.8, 2);
  const Workload w = Workload::Default(data.schema());
  const JointModel a = *Fit(data, w, 1.0, MwemConfig{}, 77);
  const JointModel b = *Fit(data, w, 1.0, MwemConfig{}, 77);
  EXPECT_EQ(std::get<ExplicitJoint>(a.body).probabilities,
            std::get<ExplicitJoint>(b.body).probabilities);
}

TEST(MwemTest, RejectsBadInput) {
  const Dataset data = ChainData(3, 100, 0.8, 2);
  MwemConfig config;
  config.iterations = 0;
  EXPECT_FALSE(Fit(data, Workload::Default(data.schema()), 1.0, config, 1).ok());
}

}  // namespace
}  // namespace dpfair
