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

#include "dpfair/random.h"

#include <set>
#include <vector>

#include "gtest/gtest.h"

namespace dpfair {
namespace {

TEST(RngTest, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_EQ(a(), b());
  }
  Rng c(42), d(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(c.Normal(), d.Normal());
    EXPECT_EQ(c.Uniform(), d.Uniform());
  }
}

TEST(RngTest, UniformRanges) {
  Rng rng(7);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.UniformOpen();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
    ASSERT_LT(rng.Index(7), 7u);
  }
}

TEST(RngTest, IndexCoversRange) {
  Rng rng(3);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 50000; ++i) ++counts[rng.Index(5)];
  for (int c : counts) EXPECT_NEAR(c / 50000.0, 0.2, 0.01);
}

TEST(StableHashTest, KnownFnvValues) {
  // FNV-1a 64 reference values.
  EXPECT_EQ(StableHash(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(StableHash("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(DeriveSeedTest, DistinctComponentsAndIndices) {
  std::set<uint64_t> seen;
  for (const char* name : {"fit", "sample", "split", "mwem/1"}) {
    for (uint64_t i = 0; i < 50; ++i) {
      EXPECT_TRUE(seen.insert(DeriveSeed(123, name, i)).second);
    }
  }
  EXPECT_EQ(DeriveSeed(9, "x", 2), DeriveSeed(9, "x", 2));
  EXPECT_NE(DeriveSeed(9, "x", 2), DeriveSeed(10, "x", 2));
}

}  // namespace
}  // namespace dpfair
