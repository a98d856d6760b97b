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

#include "popcut/preprocess.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "test_util.hpp"

namespace popcut {
namespace {

using testing::max_abs_eig;
using testing::random_feasible_z;
using testing::random_matrix;

Matrix rows2(std::initializer_list<std::initializer_list<double>> r) {
  Matrix m(static_cast<Index>(r.size()), static_cast<Index>(r.begin()->size()));
  Index i = 0;
  for (const auto& row : r) {
    Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

TEST(Center, ConstantMatrixBecomesZero) {
  const Matrix y = center(Matrix::Constant(4, 3, 2.5));
  EXPECT_EQ(y.cwiseAbs().maxCoeff(), 0.0);
}

TEST(Center, MeanZeroRowsUnchanged) {
  const Matrix x = rows2({{1, 0}, {-1, 0}});
  EXPECT_EQ(center(x), x);
}

TEST(Center, HandEvaluatedExample) {
  const Matrix y = center(rows2({{2, 0}, {0, 0}, {1, 3}}));
  EXPECT_TRUE(y.isApprox(rows2({{1, -1}, {-1, -1}, {0, 2}}), 1e-15));
}

TEST(Center, FewerThanTwoRowsThrows) {
  EXPECT_THROW(center(Matrix::Ones(1, 3)), ConfigError);
}

TEST(LambdaTau, TwoPointExample) {
  const auto lt = lambda_tau(rows2({{1, 0}, {-1, 0}}));
  EXPECT_DOUBLE_EQ(lt.tau, 1.0);
  EXPECT_DOUBLE_EQ(lt.lambda, -1.0);
}

TEST(LambdaTau, ZeroInput) {
  const auto lt = lambda_tau(Matrix::Zero(5, 3));
  EXPECT_EQ(lt.tau, 0.0);
  EXPECT_EQ(lt.lambda, 0.0);
}

TEST(LambdaTau, IdentityOnRandomCenteredData) {
  Rng rng(1);
  const Matrix y = center(random_matrix(7, 5, rng));
  const auto lt = lambda_tau(y);
  EXPECT_NEAR(lt.lambda + lt.tau / 6.0, 0.0, 1e-12);
}

TEST(LambdaTau, IdentityPropertyManyDraws) {
  Rng rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 2 + rep % 30;
    const int p = 1 + rep % 17;
    const Matrix x = random_matrix(n, p, rng).array() + 3.0;
    const Matrix y = center(x);
    const auto lt = lambda_tau(y);
    const double ref = -lt.tau / (n - 1);
    EXPECT_NEAR(lt.lambda, ref, 1e-10 * std::abs(ref));
    const Matrix g = y * y.transpose();
    EXPECT_LE(std::abs(g.sum()), 1e-8 * g.norm());
    EXPECT_LE(y.colwise().sum().cwiseAbs().maxCoeff(), 1e-8 * x.norm());
  }
}

TEST(BuildA, ZeroInput) {
  EXPECT_EQ(build_a(Matrix::Zero(3, 3), 0.0), Matrix::Zero(3, 3));
}

TEST(BuildA, TwoPointExample) {
  const Matrix y = rows2({{1, 0}, {-1, 0}});
  const Matrix g = gram(y);
  const double lambda = lambda_tau_from_gram(g).lambda;
  EXPECT_TRUE(build_a(g, lambda).isApprox(Matrix::Identity(2, 2), 1e-15));
  // The SDP1 cost G - lambda E is 2 I here.
  const Matrix c = g.array() - lambda;
  EXPECT_TRUE(c.isApprox(2.0 * Matrix::Identity(2, 2), 1e-15));
}

TEST(BuildA, SymmetricAndMatchesDefinition) {
  Rng rng(3);
  const Matrix y = center(random_matrix(9, 4, rng));
  const Matrix g = gram(y);
  EXPECT_TRUE(g.isApprox(y * y.transpose(), 1e-14));
  const double lambda = lambda_tau_from_gram(g).lambda;
  const Matrix a = build_a(g, lambda);
  EXPECT_EQ((a - a.transpose()).cwiseAbs().maxCoeff(), 0.0);
  const Matrix e = Matrix::Ones(9, 9);
  EXPECT_TRUE(a.isApprox(g - lambda * (e - Matrix::Identity(9, 9)), 1e-14));
  // sum of off-diagonal entries of A vanishes
  EXPECT_NEAR(a.sum() - a.trace(), 0.0, 1e-10 * g.norm());
}

TEST(Preprocess, BShiftUsesModelWhenKnown) {
  const auto spec = testing::factor_template_spec(0.05, 20, 10);
  const auto smp = generate(spec, 4);
  const auto with_model = preprocess(smp.x, smp.stats);
  const auto without = preprocess(smp.x);
  EXPECT_DOUBLE_EQ(with_model.b_shift, expected_tau(smp.stats));
  EXPECT_DOUBLE_EQ(without.b_shift, without.tau);
  EXPECT_TRUE(with_model.oracle_b().isApprox(
      with_model.a - with_model.b_shift * Matrix::Identity(20, 20)));
}

TEST(Preprocess, ObjectiveGapsAgreeBetweenSdp1AndA) {
  Rng rng(5);
  const Matrix y = center(random_matrix(12, 6, rng));
  const auto d = preprocess(y);
  const Matrix c1 = d.gram.array() - d.lambda;
  for (int rep = 0; rep < 100; ++rep) {
    const Matrix z = random_feasible_z(12, 4, rng);
    const Matrix z2 = random_feasible_z(12, 4, rng);
    const double gap_a = d.a.cwiseProduct(z - z2).sum();
    const double gap_c = c1.cwiseProduct(z - z2).sum();
    EXPECT_NEAR(gap_a, gap_c, 1e-9 * std::max(1.0, std::abs(gap_a)));
  }
}

TEST(Reference, BalancedTwoPoint) {
  const auto ref = build_reference(0.5, 2, 4.0);
  EXPECT_TRUE(ref.r.isApprox(rows2({{1, -1}, {-1, 1}}), 1e-15));
  EXPECT_TRUE(ref.zstar.isApprox(rows2({{1, -1}, {-1, 1}}), 1e-15));
}

TEST(Reference, TraceForImbalancedWeights) {
  const auto ref = build_reference(0.7, 10, 1.0);
  EXPECT_NEAR(ref.r.trace(), 2.1, 1e-12);
}

TEST(Reference, RankOneAndSumsToZero) {
  for (double w1 : {0.2, 0.5, 0.7}) {
    for (int n : {5, 20, 33}) {
      const auto ref = build_reference(w1, n, 3.0);
      const Vector sv = Eigen::JacobiSVD<Matrix>(ref.r).singularValues();
      const double tr = ref.r.trace();
      EXPECT_LE(sv(1), 1e-10 * tr);
      EXPECT_NEAR(sv(0), tr, 1e-10 * tr);
      EXPECT_LE(std::abs(ref.r.sum()), 1e-8 * tr);
      const int n1 = cluster_size(w1, n);
      const double rw1 = double(n1) / n;
      EXPECT_NEAR(tr, rw1 * (1 - rw1) * n * 3.0, 1e-10 * tr);
    }
  }
}

TEST(Reference, ZstarIsTheMaximizerOverRandomFeasibleZ) {
  Rng rng(6);
  const auto ref = build_reference(0.6, 15, 2.0);
  const double best = ref.r.cwiseProduct(ref.zstar).sum();
  for (int rep = 0; rep < 100; ++rep) {
    const Matrix z = random_feasible_z(15, 1 + rep % 8, rng);
    EXPECT_LE(ref.r.cwiseProduct(z).sum(), best + 1e-9);
  }
}

TEST(BiasDiagnostics, EqualTracesLeaveOnlyCentering) {
  const int n = 12;
  const double pg = 3.0;
  const auto ref = build_reference(0.5, n, pg);
  const auto b = bias_diagnostics(7.0, 7.0, 0.5, n, ref.r);
  EXPECT_EQ(b.w0.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(b.wbb.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_NEAR(b.eb_minus_r_norm, n * pg * 0.25 / (n - 1), 1e-12);
}

TEST(BiasDiagnostics, EqualWeightsCorrectionVanishes) {
  const auto ref = build_reference(0.5, 10, 1.0);
  const auto b = bias_diagnostics(9.0, 4.0, 0.5, 10, ref.r);
  EXPECT_TRUE(b.wbb.isApprox(b.w2, 1e-15));
}

TEST(BiasDiagnostics, W0NormExample) {
  const auto ref = build_reference(0.5, 10, 1.0);
  const auto b = bias_diagnostics(15.0, 5.0, 0.5, 10, ref.r);
  EXPECT_NEAR(max_abs_eig(b.w0), 5.0, 1e-12);
}

TEST(BiasDiagnostics, ClosedFormMatchesDenseEigenvalues) {
  for (double w1 : {0.3, 0.5, 0.8}) {
    for (int n : {4, 11, 30}) {
      for (double d : {-6.0, 0.0, 2.5}) {
        const auto ref = build_reference(w1, n, 1.7);
        const auto b = bias_diagnostics(10.0 + d, 10.0, w1, n, ref.r);
        const Matrix m = assemble_bias(b, ref.r);
        EXPECT_NEAR(b.eb_minus_r_norm, max_abs_eig(m), 1e-9)
            << "w1=" << w1 << " n=" << n << " d=" << d;
      }
    }
  }
}

TEST(BiasDiagnostics, AssembledBiasEqualsExpectedBMinusR) {
  // E B - R computed from E(Y Y^T) and E tau independently of the W terms.
  for (double w1 : {0.5, 0.7}) {
    const int n = 14;
    const auto spec = testing::factor_template_spec(0.02, n, 50, w1, 1.0, 1.6);
    const auto s = population_stats(spec);
    const Matrix eg = expected_gram(s);
    const double etau = expected_tau(s);
    EXPECT_NEAR(eg.trace() / n, etau, 1e-10 * etau);
    const Matrix e = Matrix::Ones(n, n);
    const Matrix id = Matrix::Identity(n, n);
    const Matrix eb = eg + etau / (n - 1.0) * (e - id) - etau * id;
    const auto ref = build_reference(w1, n, s.delta_sq);
    const auto b = bias_diagnostics(s.v1, s.v2, w1, n, ref.r);
    EXPECT_LT((eb - ref.r - assemble_bias(b, ref.r)).cwiseAbs().maxCoeff(),
              1e-10 * eg.norm());
  }
}

TEST(ExpectedGram, MatchesMonteCarloAverage) {
  const int n = 6;
  auto spec = testing::factor_template_spec(0.5, n, 4, 0.5, 1.0, 2.0);
  const auto s = population_stats(spec);
  const Matrix eg = expected_gram(s);
  Matrix acc = Matrix::Zero(n, n);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    const Matrix y = center(generate(spec, derive_seed(99, {std::uint64_t(t)})).x);
    acc += y * y.transpose();
  }
  acc /= trials;
  // Entry standard deviations are below 9, so 5 standard errors < 0.35.
  EXPECT_LT((acc - eg).cwiseAbs().maxCoeff(), 0.35);
}

TEST(Constants, GrothendieckBoundIsDisplayValue) {
  EXPECT_DOUBLE_EQ(kGrothendieckBound, 1.783);
  EXPECT_LE(M_PI / (2.0 * std::log(1.0 + std::sqrt(2.0))), kGrothendieckBound);
}

}  // namespace
}  // namespace popcut
