// Copyright 2026 The popcut Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "popcut/rng.hpp"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

namespace popcut {
namespace {

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, DeriveSeedDependsOnEveryPathElement) {
  const auto base = derive_seed(7, {1, 2, 3});
  EXPECT_EQ(base, derive_seed(7, {1, 2, 3}));
  EXPECT_NE(base, derive_seed(8, {1, 2, 3}));
  EXPECT_NE(base, derive_seed(7, {2, 1, 3}));
  EXPECT_NE(base, derive_seed(7, {1, 2, 4}));
  EXPECT_NE(base, derive_seed(7, {1, 2}));
}

TEST(Rng, DerivedSeedsAreDistinctOverAGrid) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t g = 0; g < 10; ++g)
    for (std::uint64_t e = 0; e < 3; ++e)
      for (std::uint64_t t = 0; t < 100; ++t) seen.insert(derive_seed(1, {g, e, t}));
  EXPECT_EQ(seen.size(), 3000u);
}

TEST(Rng, SplitIsPureFunctionOfSeedAndStream) {
  Rng a(5);
  a.next_u64();  // advancing the parent does not change children
  Rng c1 = a.split(3);
  Rng c2 = Rng(5).split(3);
  EXPECT_EQ(c1.next_u64(), c2.next_u64());
  EXPECT_NE(Rng(5).split(3).next_u64(), Rng(5).split(4).next_u64());
}

TEST(Rng, UniformInUnitInterval) {
  Rng r(1);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 0.005);
}

TEST(Rng, NormalMoments) {
  Rng r(2);
  double s1 = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s1 += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s1 / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Rng, RademacherAndBernoulli) {
  Rng r(3);
  int plus = 0, hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double s = r.rademacher();
    ASSERT_TRUE(s == 1.0 || s == -1.0);
    plus += s > 0;
    hits += r.bernoulli(0.3);
  }
  EXPECT_NEAR(plus / double(n), 0.5, 0.01);
  EXPECT_NEAR(hits / double(n), 0.3, 0.01);
  EXPECT_FALSE(r.bernoulli(0.0));
  EXPECT_TRUE(r.bernoulli(1.0));
}

}  // namespace
}  // namespace popcut
