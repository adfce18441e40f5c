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

#include <cmath>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpfair {
namespace {

using ::dpfair::testing::Histogram;
using ::dpfair::testing::MakeSchema;
using ::dpfair::testing::TotalVariation;
using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::Pointwise;

JointModel Explicit(std::shared_ptr<const Schema> schema, std::vector<double> p) {
  JointModel model;
  model.kind = "explicit";
  model.body = ExplicitJoint{schema->cardinalities(), std::move(p)};
  model.schema = std::move(schema);
  return model;
}

std::vector<double> RandomSimplex(size_t n, Rng& rng) {
  std::vector<double> p(n);
  double sum = 0.0;
  for (double& v : p) sum += v = -std::log(rng.UniformOpen());
  for (double& v : p) v /= sum;
  return p;
}

TEST(SampleTest, PointMass) {
  auto schema = MakeSchema({2, 2});
  Rng rng(1);
  const Dataset out = Sample(Explicit(schema, {1.0, 0.0, 0.0, 0.0}), 100, rng);
  ASSERT_EQ(out.size(), 100u);
  for (size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out.at(i, 0), 0);
    EXPECT_EQ(out.at(i, 1), 0);
  }
}

TEST(SampleTest, UniformCells) {
  auto schema = MakeSchema({2, 2});
  Rng rng(2);
  const Dataset out = Sample(Explicit(schema, {0.25, 0.25, 0.25, 0.25}), 100'000, rng);
  EXPECT_THAT(Histogram(out, {0, 1}), Pointwise(DoubleNear(0.01), {0.25, 0.25, 0.25, 0.25}));
}

TEST(SampleTest, TwoWayMarginalsOfRandomJoints) {
  auto schema = MakeSchema({3, 2, 4, 2});
  Rng gen(3);
  for (int trial = 0; trial < 3; ++trial) {
    const JointModel model = Explicit(schema, RandomSimplex(48, gen));
    const ExplicitJoint& joint = std::get<ExplicitJoint>(model.body);
    Rng rng(10 + trial);
    const Dataset out = Sample(model, 100'000, rng);
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        const std::vector<int> attrs = {a, b};
        // Oracle marginal by direct enumeration of the flattened domain.
        std::vector<double> oracle(schema->cardinality(a) * schema->cardinality(b), 0.0);
        for (size_t x = 0; x < joint.probabilities.size(); ++x) {
          std::vector<int> rec(4);
          size_t rest = x;
          for (int k = 3; k >= 0; --k) {
            rec[k] = static_cast<int>(rest % schema->cardinality(k));
            rest /= schema->cardinality(k);
          }
          oracle[rec[a] * schema->cardinality(b) + rec[b]] += joint.probabilities[x];
        }
        EXPECT_LT(TotalVariation(Histogram(out, attrs), oracle), 0.02);
        EXPECT_THAT(JointMarginal(joint, attrs).cells, Pointwise(DoubleNear(1e-12), oracle));
      }
    }
  }
}

TEST(SampleTest, Deterministic) {
  auto schema = MakeSchema({3, 2});
  const JointModel model = Explicit(schema, {0.1, 0.2, 0.3, 0.1, 0.2, 0.1});
  Rng a(5), b(5);
  EXPECT_TRUE(Sample(model, 500, a) == Sample(model, 500, b));
}

TEST(ConditionalTest, FromTable) {
  ContingencyTable t;
  t.attributes = {0, 2};
  t.cardinalities = {2, 3};
  t.cells = {1, 1, 2, 0, 0, 0};
  t.total = 4;
  absl::StatusOr<ConditionalTable> c = ConditionalFromTable(t, 2);
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_THAT(c->parents, ElementsAre(0));
  EXPECT_THAT(c->probabilities,
              Pointwise(DoubleNear(1e-12), {0.25, 0.25, 0.5, 1.0 / 3, 1.0 / 3, 1.0 / 3}));
  absl::StatusOr<ConditionalTable> parent = ConditionalFromTable(t, 0);
  ASSERT_TRUE(parent.ok());
  // p(a0 | a2): columns (1,0), (1,0), (2,0).
  EXPECT_THAT(parent->probabilities,
              Pointwise(DoubleNear(1e-12), {1.0, 0.0, 1.0, 0.0, 1.0, 0.0}));
  EXPECT_FALSE(ConditionalFromTable(t, 1).ok());
}

BayesNet ChainNet(const Schema& schema, double keep) {
  BayesNet net;
  net.ordering = {0, 1, 2};
  net.conditionals.resize(3);
  net.conditionals[0] = {0, 2, {}, {}, {0.5, 0.5}};
  net.conditionals[1] = {1, 2, {0}, {2}, {keep, 1 - keep, 1 - keep, keep}};
  net.conditionals[2] = {2, 2, {1}, {2}, {keep, 1 - keep, 1 - keep, keep}};
  return net;
}

TEST(BayesNetTest, ValidationAndSampling) {
  auto schema = MakeSchema({2, 2, 2});
  BayesNet net = ChainNet(*schema, 0.9);
  EXPECT_TRUE(ValidateBayesNet(net, *schema).ok());

  JointModel model;
  model.schema = schema;
  model.kind = "bayesnet";
  model.body = net;
  absl::StatusOr<ExplicitJoint> joint = ToExplicit(model);
  ASSERT_TRUE(joint.ok());
  // p(0,0,0) = 0.5 * 0.9 * 0.9.
  EXPECT_NEAR(joint->probabilities[0], 0.405, 1e-12);
  Rng rng(4);
  const Dataset out = Sample(model, 100'000, rng);
  EXPECT_LT(TotalVariation(Histogram(out, {0, 1, 2}), joint->probabilities), 0.02);

  BayesNet bad_order = net;
  bad_order.ordering = {1, 0, 2};
  EXPECT_FALSE(ValidateBayesNet(bad_order, *schema).ok());
  BayesNet bad_row = net;
  bad_row.conditionals[1].probabilities[0] = 0.5;
  EXPECT_FALSE(ValidateBayesNet(bad_row, *schema).ok());
  BayesNet bad_shape = net;
  bad_shape.conditionals[2].parent_cardinalities = {3};
  EXPECT_FALSE(ValidateBayesNet(bad_shape, *schema).ok());
}

TEST(SpanningTreeTest, Checks) {
  EXPECT_TRUE(IsSpanningTree({{{0, 1}, {1, 2}, {1, 3}}, 0}, 4));
  EXPECT_FALSE(IsSpanningTree({{{0, 1}, {1, 2}}, 0}, 4));
  EXPECT_FALSE(IsSpanningTree({{{0, 1}, {1, 0}, {2, 3}}, 0}, 4));
  EXPECT_FALSE(IsSpanningTree({{{0, 1}, {1, 2}, {2, 4}}, 0}, 4));
  EXPECT_TRUE(IsSpanningTree({{}, 0}, 1));
}

TEST(ModelJsonTest, RoundTripPreservesSamples) {
  auto schema = MakeSchema({2, 2, 2});
  JointModel net_model;
  net_model.schema = schema;
  net_model.kind = "bayesnet";
  net_model.body = ChainNet(*schema, 0.8);
  for (const JointModel& model :
       {Explicit(schema, {0.1, 0.1, 0.2, 0.1, 0.1, 0.2, 0.1, 0.1}), net_model}) {
    absl::StatusOr<JointModel> back = ModelFromJson(ModelToJson(model));
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_EQ(back->kind, model.kind);
    EXPECT_TRUE(*back->schema == *model.schema);
    Rng a(9), b(9);
    EXPECT_TRUE(Sample(model, 300, a) == Sample(*back, 300, b));
  }
}

TEST(ToExplicitTest, RespectsCap) {
  auto schema = MakeSchema({2, 2, 2});
  JointModel model;
  model.schema = schema;
  model.kind = "bayesnet";
  model.body = ChainNet(*schema, 0.8);
  EXPECT_FALSE(ToExplicit(model, 4).ok());
  absl::StatusOr<ExplicitJoint> joint = ToExplicit(model, 8);
  ASSERT_TRUE(joint.ok());
  double sum = 0.0;
  for (double p : joint->probabilities) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

}  // namespace
}  // namespace dpfair
