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

#include <cmath>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dpfair {
namespace {

using ::dpfair::testing::MakeDataset;
using ::dpfair::testing::MakeSchema;
using ::testing::DoubleNear;
using ::testing::ElementsAre;
using ::testing::Pointwise;

MarginalQuery Query(std::vector<int> attrs, const Schema& schema) {
  absl::StatusOr<MarginalQuery> q = MarginalQuery::Create(std::move(attrs), schema);
  EXPECT_TRUE(q.ok()) << q.status();
  return *q;
}

// Two-attribute table with the given counts, row-major.
ContingencyTable TwoWay(int rows, int cols, std::vector<double> cells) {
  ContingencyTable t;
  t.attributes = {0, 1};
  t.cardinalities = {rows, cols};
  t.cells = std::move(cells);
  t.total = t.Sum();
  return t;
}

Dataset RandomData(const std::vector<int>& cards, size_t n, uint64_t seed) {
  auto schema = MakeSchema(cards);
  Rng rng(seed);
  std::vector<std::vector<int>> rows(n, std::vector<int>(cards.size()));
  for (auto& row : rows) {
    for (size_t a = 0; a < cards.size(); ++a) row[a] = static_cast<int>(rng.Index(cards[a]));
  }
  return MakeDataset(schema, rows);
}

TEST(MarginalQueryTest, Validation) {
  auto schema = MakeSchema({2, 2, 2, 2});
  EXPECT_FALSE(MarginalQuery::Create({}, *schema).ok());
  EXPECT_FALSE(MarginalQuery::Create({0, 0}, *schema).ok());
  EXPECT_FALSE(MarginalQuery::Create({0, 4}, *schema).ok());
  EXPECT_FALSE(MarginalQuery::Create({0, 1, 2, 3}, *schema).ok());
  EXPECT_THAT(Query({2, 0}, *schema).attributes(), ElementsAre(0, 2));
}

TEST(MarginalTest, Counts) {
  auto one = MakeSchema({2, 2}, 1, 0);
  const Dataset data = MakeDataset(one, {{0, 0}, {0, 1}, {1, 0}, {0, 1}});
  EXPECT_THAT(Marginal(data, Query({0}, *one)).cells, ElementsAre(3, 1));

  auto two = MakeSchema({2, 2});
  const Dataset pairs = MakeDataset(two, {{0, 0}, {1, 1}});
  const ContingencyTable t = Marginal(pairs, Query({0, 1}, *two));
  EXPECT_THAT(t.cells, ElementsAre(1, 0, 0, 1));
  EXPECT_EQ(t.total, 2.0);
}

TEST(MarginalTest, MatchesBruteForceAndProjection) {
  const Dataset data = RandomData({3, 2, 4, 2}, 500, 31);
  const Schema& schema = data.schema();
  const ContingencyTable wide = Marginal(data, Query({0, 1, 2}, schema));
  // Brute force.
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 2; ++y) {
      for (int z = 0; z < 4; ++z) {
        double count = 0;
        for (size_t i = 0; i < data.size(); ++i) {
          count += data.at(i, 0) == x && data.at(i, 1) == y && data.at(i, 2) == z;
        }
        ASSERT_EQ(wide.cells[(x * 2 + y) * 4 + z], count);
      }
    }
  }
  for (std::vector<int> sub : {std::vector<int>{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}}) {
    absl::StatusOr<ContingencyTable> projected = Project(wide, sub);
    ASSERT_TRUE(projected.ok());
    EXPECT_EQ(projected->cells, Marginal(data, Query(sub, schema)).cells);
  }
  EXPECT_FALSE(Project(wide, std::vector<int>{3}).ok());
}

TEST(NoisyMarginalTest, HugeEpsilonIsNearExact) {
  const Dataset data = RandomData({3, 2, 2}, 300, 2);
  const MarginalQuery q = Query({0, 2}, data.schema());
  Rng rng(6);
  absl::StatusOr<ContingencyTable> noisy =
      NoisyMarginal(data, q, *PrivacyBudget::Create(1e6), NoiseMechanism{}, rng);
  ASSERT_TRUE(noisy.ok());
  EXPECT_THAT(noisy->cells, Pointwise(DoubleNear(0.01), Marginal(data, q).cells));
}

TEST(NoisyMarginalTest, LaplaceErrorAtEpsilonOne) {
  const Dataset data = RandomData({2, 2}, 50, 3);
  const MarginalQuery q = Query({0}, data.schema());
  const double exact = Marginal(data, q).cells[0];
  Rng rng(12);
  double sum = 0.0, abs_sum = 0.0;
  const int reps = 10'000;
  for (int r = 0; r < reps; ++r) {
    absl::StatusOr<ContingencyTable> noisy =
        NoisyMarginal(data, q, *PrivacyBudget::Create(1.0), NoiseMechanism{}, rng);
    ASSERT_TRUE(noisy.ok());
    const double err = noisy->cells[0] - exact;
    sum += err;
    abs_sum += std::abs(err);
  }
  EXPECT_NEAR(sum / reps, 0.0, 0.05);
  EXPECT_NEAR(abs_sum / reps, 1.0, 0.05);
}

TEST(NoisyMarginalTest, NotClamped) {
  auto schema = MakeSchema({3, 2});
  const Dataset data = MakeDataset(schema, {{0, 0}});
  Rng rng(1);
  bool negative = false;
  for (int r = 0; r < 50 && !negative; ++r) {
    auto noisy = NoisyMarginal(data, Query({0}, *schema), *PrivacyBudget::Create(0.5),
                               NoiseMechanism{}, rng);
    ASSERT_TRUE(noisy.ok());
    for (double c : noisy->cells) negative |= c < 0;
  }
  EXPECT_TRUE(negative);
}

TEST(ToDistributionTest, Examples) {
  ContingencyTable t = TwoWay(1, 2, {3, 1});
  t.attributes = {0};
  t.cardinalities = {2};
  EXPECT_THAT(ToDistribution(t).cells, ElementsAre(0.75, 0.25));
  t.cells = {-1, 2};
  EXPECT_THAT(ToDistribution(t).cells, ElementsAre(0.0, 1.0));
  t.cells = {-2, -3};
  EXPECT_THAT(ToDistribution(t).cells, ElementsAre(0.5, 0.5));
}

TEST(ToDistributionTest, Idempotent) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> cells(6);
    for (double& c : cells) c = rng.Uniform() * 10 - 2;
    const ContingencyTable once = ToDistribution(TwoWay(2, 3, cells));
    const ContingencyTable twice = ToDistribution(once);
    EXPECT_THAT(twice.cells, Pointwise(DoubleNear(1e-15), once.cells));
  }
}

TEST(MutualInformationTest, Examples) {
  EXPECT_EQ(*MutualInformation(TwoWay(2, 2, {25, 25, 25, 25})), 0.0);
  EXPECT_NEAR(*MutualInformation(TwoWay(2, 2, {50, 0, 0, 50})), std::log(2.0), 1e-12);
  // p = [.3 .1; .1 .5], both margins (.4, .6).
  const double hand = 0.3 * std::log(0.3 / (0.4 * 0.4)) +
                      2 * 0.1 * std::log(0.1 / (0.4 * 0.6)) +
                      0.5 * std::log(0.5 / (0.6 * 0.6));
  EXPECT_NEAR(*MutualInformation(TwoWay(2, 2, {30, 10, 10, 50})), hand, 1e-12);
  ContingencyTable three = TwoWay(2, 2, {1, 1, 1, 1});
  three.attributes = {0, 1, 2};
  three.cardinalities = {2, 2, 1};
  EXPECT_FALSE(MutualInformation(three).ok());
}

TEST(MutualInformationTest, SymmetryAndBounds) {
  Rng rng(1000);
  for (int trial = 0; trial < 1000; ++trial) {
    const int r = 2 + static_cast<int>(rng.Index(4));
    const int c = 2 + static_cast<int>(rng.Index(4));
    std::vector<double> cells(r * c), transposed(r * c);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < c; ++j) {
        // Sparse tables hit the 0 ln 0 path.
        const double v = rng.Uniform() < 0.3 ? 0.0 : static_cast<double>(rng.Index(50));
        cells[i * c + j] = v;
        transposed[j * r + i] = v;
      }
    }
    cells[0] += 1;
    transposed[0] += 1;
    const double mi = *MutualInformation(TwoWay(r, c, cells));
    const double mt = *MutualInformation(TwoWay(c, r, transposed));
    ASSERT_NEAR(mi, mt, 1e-12);
    ASSERT_GE(mi, 0.0);
    ASSERT_LE(mi, std::min(std::log(r), std::log(c)) + 1e-12);
  }
}

TEST(MutualInformationTest, WithRestOfTwoWayMatchesPairwise) {
  const ContingencyTable t = TwoWay(2, 3, {5, 1, 7, 2, 9, 3});
  EXPECT_NEAR(*MutualInformationWithRest(t, 0), *MutualInformation(t), 1e-12);
  EXPECT_NEAR(*MutualInformationWithRest(t, 1), *MutualInformation(t), 1e-12);
}

TEST(MutualInformationTest, SensitivityBoundHolds) {
  // Adding one record never moves MI by more than the bound.
  const size_t n = 40;
  const double bound = MutualInformationSensitivity(n);
  const double expected = (2.0 / n) * std::log((n + 1) / 2.0) +
                          ((n - 1.0) / n) * std::log((n + 1.0) / (n - 1.0));
  EXPECT_NEAR(bound, expected, 1e-15);
  Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> cells(4, 0.0);
    for (size_t i = 0; i + 1 < n; ++i) cells[rng.Index(4)] += 1;
    const double before = *MutualInformation(TwoWay(2, 2, cells));
    for (int c = 0; c < 4; ++c) {
      std::vector<double> added = cells;
      added[c] += 1;
      ASSERT_LE(std::abs(*MutualInformation(TwoWay(2, 2, added)) - before), bound + 1e-12);
    }
  }
}

TEST(TableJsonTest, RoundTrip) {
  const ContingencyTable t = TwoWay(2, 3, {1, 2, 3, 4, 5, 6.5});
  absl::StatusOr<ContingencyTable> back = TableFromJson(TableToJson(t));
  ASSERT_TRUE(back.ok());
  EXPECT_EQ(back->cells, t.cells);
  EXPECT_EQ(back->attributes, t.attributes);
  EXPECT_DOUBLE_EQ(L1Distance(t, *back), 0.0);
}

}  // namespace
}  // namespace dpfair
