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

#include <algorithm>
#include <cmath>

namespace popcut {

Matrix CenteredData::oracle_b() const {
  Matrix b = a;
  b.diagonal().array() -= b_shift;
  return b;
}

Matrix center(const Matrix& x) {
  if (x.rows() < 2) throw ConfigError("center: need at least two rows");
  const Eigen::RowVectorXd mean = x.colwise().mean();
  return x.rowwise() - mean;
}

LambdaTau lambda_tau_from_gram(const Matrix& gram) {
  const Index n = gram.rows();
  if (n < 2) throw ConfigError("lambda_tau: need at least two rows");
  double upper = 0.0;
  for (Index j = 1; j < n; ++j) upper += gram.col(j).head(j).sum();
  LambdaTau out;
  out.lambda = 2.0 * upper / (static_cast<double>(n) * (n - 1));
  out.tau = gram.trace() / n;
  return out;
}

Matrix gram(const Matrix& y) {
  Matrix g = Matrix::Zero(y.rows(), y.rows());
  g.selfadjointView<Eigen::Lower>().rankUpdate(y);
  g.triangularView<Eigen::StrictlyUpper>() = g.transpose();
  return g;
}

LambdaTau lambda_tau(const Matrix& y) { return lambda_tau_from_gram(gram(y)); }

Matrix build_a(const Matrix& gram, double lambda) {
  Matrix a = gram.array() - lambda;
  a.diagonal() = gram.diagonal();
  return a;
}

double expected_tau(const PopulationStats& s) {
  const double w1 = s.w1();
  const double w2 = s.w2();
  const double vm = w1 * s.v1 + w2 * s.v2;
  return vm * (s.n - 1.0) / s.n + w1 * w2 * s.delta_sq;
}

CenteredData preprocess(const Matrix& x,
                        const std::optional<PopulationStats>& model) {
  CenteredData d;
  d.y = center(x);
  d.gram = gram(d.y);
  const LambdaTau lt = lambda_tau_from_gram(d.gram);
  d.lambda = lt.lambda;
  d.tau = lt.tau;
  d.a = build_a(d.gram, d.lambda);
  d.b_shift = model ? expected_tau(*model) : d.tau;
  return d;
}

ReferenceMatrices build_reference(double w1, int n, double p_gamma) {
  const int n1 = cluster_size(w1, n);
  const int n2 = n - n1;
  const double rw1 = static_cast<double>(n1) / n;
  const double rw2 = static_cast<double>(n2) / n;
  ReferenceMatrices out;
  out.r.resize(n, n);
  out.r.topLeftCorner(n1, n1).setConstant(p_gamma * rw2 * rw2);
  out.r.topRightCorner(n1, n2).setConstant(-p_gamma * rw1 * rw2);
  out.r.bottomLeftCorner(n2, n1).setConstant(-p_gamma * rw1 * rw2);
  out.r.bottomRightCorner(n2, n2).setConstant(p_gamma * rw1 * rw1);
  const Vector u = membership_vector(n, n1).cast<double>();
  out.zstar = u * u.transpose();
  return out;
}

BiasDiagnostics bias_diagnostics(double v1, double v2, double w1, int n,
                                 const Matrix& r) {
  const int n1 = cluster_size(w1, n);
  const int n2 = n - n1;
  const double rw1 = static_cast<double>(n1) / n;
  const double rw2 = static_cast<double>(n2) / n;
  const double d = v1 - v2;
  BiasDiagnostics out;

  out.w0 = Matrix::Zero(n, n);
  out.w0.diagonal().head(n1).setConstant(d * rw2);
  out.w0.diagonal().tail(n2).setConstant(-d * rw1);

  out.w2 = Matrix::Zero(n, n);
  out.w2.topLeftCorner(n1, n1).setConstant(d / n);
  out.w2.bottomRightCorner(n2, n2).setConstant(-d / n);

  const double e = d * (rw2 - rw1) / n;
  out.wbb = out.w2.array() + e;

  // Spectrum of W0 - Wbb - c (I - E/n): on vectors summing to zero within
  // each block the E terms vanish; the rest lives on span{1_{C1}, 1_{C2}}.
  const double c = r.trace() / (n - 1.0);
  const double in_block1 = d * rw2 - c;
  const double in_block2 = -d * rw1 - c;
  Eigen::Matrix2d k;
  k(0, 0) = d * rw2 - d * n1 / n - e * n1 - c * (1.0 - rw1);
  k(1, 1) = -d * rw1 + d * n2 / n - e * n2 - c * (1.0 - rw2);
  k(0, 1) = k(1, 0) = (c / n - e) * std::sqrt(static_cast<double>(n1) * n2);
  const Eigen::Vector2d span_eigs =
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(k).eigenvalues();
  double norm = span_eigs.cwiseAbs().maxCoeff();
  if (n1 > 1) norm = std::max(norm, std::abs(in_block1));
  if (n2 > 1) norm = std::max(norm, std::abs(in_block2));
  out.eb_minus_r_norm = norm;
  return out;
}

Matrix assemble_bias(const BiasDiagnostics& bias, const Matrix& r) {
  const Index n = r.rows();
  const double c = r.trace() / (n - 1.0);
  Matrix centering = Matrix::Identity(n, n).array() - 1.0 / n;
  return bias.w0 - bias.wbb - c * centering;
}

Matrix expected_gram(const PopulationStats& s) {
  const int n = s.n;
  Vector v(n);
  v.head(s.n1).setConstant(s.v1);
  v.tail(s.n2).setConstant(s.v2);
  Matrix centering = Matrix::Identity(n, n).array() - 1.0 / n;
  Matrix sigma_y = centering * v.asDiagonal() * centering;
  return sigma_y + build_reference(s.w1(), n, s.delta_sq).r;
}

}  // namespace popcut
