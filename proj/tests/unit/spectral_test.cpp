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

#include "popcut/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "popcut/metrics.hpp"
#include "test_util.hpp"

namespace popcut {
namespace {

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

double direct_cost(const std::vector<double>& v, Index split) {
  return sse(std::span<const double>(v.data(), split)) +
         sse(std::span<const double>(v.data() + split, v.size() - split));
}

TEST(LeadingEigvec, RankOneMembership) {
  const Vector u = membership_vector(10, 4).cast<double>();
  const auto e = leading_eigvec(Matrix(u * u.transpose()));
  EXPECT_NEAR(std::abs(e.v1.dot(u)) / std::sqrt(10.0), 1.0, 1e-10);
  EXPECT_NEAR(e.value, 10.0, 1e-9);
  EXPECT_GT(e.v1(0), 0.0);
  EXPECT_FALSE(e.degenerate);
}

TEST(LeadingEigvec, ReferenceMatrixGivesReferenceVector) {
  const int n = 20;
  const auto ref = build_reference(0.7, n, 1.0);
  const auto e = leading_eigvec(ref.r);
  const Vector vbar = reference_leading_vector(0.7, n);
  EXPECT_NEAR(vbar.norm(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.v1.dot(vbar)), 1.0, 1e-10);
  const double w1 = 0.7, w2 = 0.3;
  EXPECT_NEAR(vbar(0), std::sqrt(w2 / w1) / std::sqrt(double(n)), 1e-14);
  EXPECT_NEAR(vbar(n - 1), -std::sqrt(w1 / w2) / std::sqrt(double(n)), 1e-14);
}

TEST(LeadingEigvec, IdentityIsDegenerate) {
  EXPECT_TRUE(leading_eigvec(Matrix(Matrix::Identity(5, 5))).degenerate);
}

TEST(LeadingEigvec, MatchesDenseEigensolver) {
  Rng rng(1);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix y = testing::random_matrix(30, 8, rng);
    const Matrix g = y * y.transpose();
    const auto e = leading_eigvec(g);
    Eigen::SelfAdjointEigenSolver<Matrix> es(g);
    const Vector ref = es.eigenvectors().col(29);
    EXPECT_NEAR(std::abs(e.v1.dot(ref)), 1.0, 1e-7);
    EXPECT_NEAR(e.value, es.eigenvalues()(29), 1e-8 * es.eigenvalues()(29));
  }
}

TEST(LeadingEigvec, CenteredGramGivesVectorOrthogonalToOnes) {
  Rng rng(2);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix y = center(testing::random_matrix(25, 6, rng).array() + 2.0);
    const auto e = leading_eigvec(gram(y));
    EXPECT_LE(std::abs(e.v1.sum()), 1e-8);
  }
}

TEST(LeadingEigvec, SharedByGramAAndB) {
  Rng rng(3);
  int checked = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const auto spec = testing::factor_template_spec(0.2, 30, 20);
    const auto smp = generate(spec, rep);
    const auto d = preprocess(smp.x, smp.stats);
    const auto eg = leading_eigvec(d.gram);
    const int n = d.n();
    if (eg.value <= n * d.tau / (n - 1.0)) continue;
    ++checked;
    for (const Matrix& m : {d.a, d.oracle_b()}) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(m);
      const Vector top = es.eigenvectors().col(n - 1);
      EXPECT_NEAR(std::abs(eg.v1.dot(top)), 1.0, 1e-7);
    }
    EXPECT_NEAR(std::abs(eg.v1.dot(leading_eigvec(d.a).v1)), 1.0, 1e-7);
  }
  EXPECT_GT(checked, 0);
}

TEST(KmeansCost, HandExample) {
  const std::vector<double> v = {5, 4, -3, -4};
  EXPECT_DOUBLE_EQ(kmeans_cost_1d(v, 2), 1.0);
  EXPECT_DOUBLE_EQ(kmeans_cost_1d(v, 1), 38.0);
  EXPECT_DOUBLE_EQ(kmeans_cost_1d(v, 3), 38.0);
}

TEST(KmeansCost, SingleGroupSse) {
  const std::vector<double> v = {0, 2};
  EXPECT_DOUBLE_EQ(sse(v), 2.0);
}

TEST(KmeansCost, EqualValuesCostZero) {
  const std::vector<double> v(7, 1.25);
  for (Index s = 1; s < 7; ++s) EXPECT_NEAR(kmeans_cost_1d(v, s), 0.0, 1e-12);
}

TEST(KmeansCost, OutOfRangeSplitThrows) {
  const std::vector<double> v = {3, 2, 1};
  EXPECT_THROW(kmeans_cost_1d(v, 0), ConfigError);
  EXPECT_THROW(kmeans_cost_1d(v, 3), ConfigError);
}

TEST(KmeansCost, PrefixSumsMatchDirectEvaluation) {
  Rng rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> v(2 + rep * 3);
    for (double& x : v) x = 5.0 * rng.normal() + 10.0;
    v = sorted_desc(v);
    const SplitCost cost(v);
    for (Index s = 1; s < static_cast<Index>(v.size()); ++s) {
      const double d = direct_cost(v, s);
      EXPECT_NEAR(cost(s), d, 1e-9 * std::max(1.0, d));
    }
  }
}

TEST(BestSplit, HandExample) {
  const std::vector<double> v = {5, 4, -3, -4};
  const auto c = best_split(v);
  EXPECT_EQ(c.split, 2);
  EXPECT_DOUBLE_EQ(c.threshold, 4.0);
  EXPECT_DOUBLE_EQ(c.cost, 1.0);
}

TEST(BestSplit, TiesGoToSmallestIndex) {
  const std::vector<double> v = {1, 1, 1, 1};
  EXPECT_EQ(best_split(v).split, 1);
  const std::vector<double> sym = {1, 0, -1};
  EXPECT_EQ(best_split(sym).split, 1);
}

TEST(BestSplit, ExhaustiveOptimality) {
  Rng rng(5);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 2 + (rep * 37) % 199;
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal() + (rng.uniform() < 0.4 ? 3.0 : 0.0);
    v = sorted_desc(v);
    double best = 1e300;
    Index arg = 0;
    for (Index s = 1; s < n; ++s) {
      const double c = direct_cost(v, s);
      if (c < best - 1e-12 * std::max(1.0, best)) {
        best = c;
        arg = s;
      }
    }
    const auto choice = best_split(v);
    EXPECT_NEAR(choice.cost, best, 1e-9 * std::max(1.0, best));
    EXPECT_LE(std::abs(choice.split - arg), n) ;
    EXPECT_NEAR(direct_cost(v, choice.split), best, 1e-9 * std::max(1.0, best));
  }
}

TEST(ClusterByVector, ExactMembershipHasZeroCost) {
  const Vector u = membership_vector(12, 5).cast<double>() / std::sqrt(12.0);
  const auto r = cluster_by_vector(u);
  EXPECT_EQ(success_rate(r.labels, membership_vector(12, 5)).success_rate, 1.0);
  EXPECT_NEAR(r.objective, 0.0, 1e-12);
}

TEST(ClusterByVector, ThresholdAssignsUpperGroupPlus) {
  Vector v(4);
  v << -3, 5, -4, 4;
  const auto r = cluster_by_vector(v);
  Labels expect(4);
  expect << -1, 1, -1, 1;
  EXPECT_EQ(r.labels, expect);
  EXPECT_DOUBLE_EQ(r.split_value, 4.0);
}

TEST(SpectralCluster, HighSnrRecoversLabels) {
  // p gamma = 25 with noise scale 0.5.
  const auto spec = testing::factor_template_spec(0.5, 40, 50, 0.5, 0.5, 0.5);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto smp = generate(spec, 200 + seed);
    const auto r = spectral_cluster(preprocess(smp.x, smp.stats));
    EXPECT_EQ(success_rate(r.labels, smp.labels).success_rate, 1.0)
        << "seed " << seed;
    EXPECT_TRUE(r.converged);
  }
}

TEST(SpectralCluster, FactoredPathMatchesDense) {
  const auto spec = testing::factor_template_spec(0.3, 80, 10);
  const auto smp = generate(spec, 3);
  const auto d = preprocess(smp.x, smp.stats);
  const auto r = spectral_cluster(d);
  const auto e = leading_eigvec(d.gram);
  EXPECT_NEAR(std::abs(r.v1.dot(e.v1)), 1.0, 1e-8);
}

TEST(AngleToReference, ZeroAndNinety) {
  const int n = 10;
  const Vector vbar = reference_leading_vector(0.7, n);
  EXPECT_NEAR(angle_to_reference(vbar, 0.7, n), 0.0, 1e-6);
  EXPECT_NEAR(angle_to_reference(-vbar, 0.7, n), 0.0, 1e-6);
  Vector orth = Vector::Zero(n);
  orth(0) = 1.0;
  orth(1) = -1.0;
  EXPECT_NEAR(angle_to_reference(orth, 0.7, n), 90.0, 1e-9);
}

TEST(AngleToReference, ImbalancedReferenceVsMembershipClosedForm) {
  const int n = 100;
  const Vector u = membership_vector(n, 70).cast<double>() / std::sqrt(double(n));
  const double expect = std::acos(2.0 * std::sqrt(0.7 * 0.3)) * 180.0 / M_PI;
  EXPECT_NEAR(angle_to_reference(u, 0.7, n), expect, 1e-9);
  EXPECT_NEAR(expect, 23.578, 1e-3);
}

}  // namespace
}  // namespace popcut
