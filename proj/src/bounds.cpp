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

#include "popcut/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "popcut/preprocess.hpp"
#include "popcut/rng.hpp"

namespace popcut {

double concentration_envelope(const PopulationStats& s) {
  const double n = s.n;
  const double p = s.p;
  const double sigma = std::sqrt(s.sigma_max_sq);
  return s.sigma_max_sq * std::max(std::sqrt(n * p), n) +
         sigma * n * std::sqrt(s.delta_sq);
}

double gram_deviation_norm(const Matrix& y, const PopulationStats& s) {
  Matrix d = y * y.transpose();
  d -= expected_gram(s);
  const Vector eig =
      Eigen::SelfAdjointEigenSolver<Matrix>(d, Eigen::EigenvaluesOnly)
          .eigenvalues();
  return std::max(std::abs(eig(0)), std::abs(eig(eig.size() - 1)));
}

ConcentrationReport verify_concentration(
    const ModelTemplate& model, const std::vector<std::pair<int, int>>& sizes,
    int trials, std::uint64_t seed) {
  if (sizes.empty()) throw ConfigError("verify_concentration: no sizes");
  if (trials < 1) throw ConfigError("verify_concentration: trials < 1");
  ConcentrationReport report;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const auto [n, p] = sizes[k];
    const MixtureSpec spec = model.at(n, p);
    const PopulationStats stats = population_stats(spec);
    ConcentrationRow row;
    row.n = n;
    row.p = p;
    row.envelope = concentration_envelope(stats);
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
      const LabeledSample sample = generate(
          spec, derive_seed(seed, {k, static_cast<std::uint64_t>(t)}));
      const double dev = gram_deviation_norm(center(sample.x), stats);
      row.empirical_max = std::max(row.empirical_max, dev);
      sum += dev;
    }
    row.empirical_mean = sum / trials;
    row.ratio = row.empirical_max / row.envelope;
    report.rows.push_back(row);
  }
  report.fitted_constant = report.rows.front().ratio;
  for (const auto& row : report.rows) {
    report.max_relative_deviation =
        std::max(report.max_relative_deviation,
                 std::abs(row.ratio / report.fitted_constant - 1.0));
  }
  return report;
}

double hanson_wright_statistic(const Matrix& z, const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() != z.rows()) {
    throw ConfigError("hanson_wright_statistic: shape mismatch");
  }
  const Matrix g = z * z.transpose();
  return a.cwiseProduct(g).sum() - a.diagonal().dot(g.diagonal());
}

void HwInput::validate() const {
  if (a.rows() < 2 || a.rows() != a.cols()) {
    throw ConfigError("hanson_wright: A must be square with n >= 2");
  }
  if (h.empty() || (h.size() != 1 && static_cast<Index>(h.size()) != a.rows())) {
    throw ConfigError("hanson_wright: need one shared H or one per row");
  }
  for (const auto& m : h) {
    if (m.rows() != h[0].rows() || m.cols() != h[0].cols() || m.size() == 0) {
      throw ConfigError("hanson_wright: inconsistent H shapes");
    }
  }
}

double HwInput::sigma_sq() const {
  double s = 0.0;
  for (const auto& m : h) {
    const Vector sv = Eigen::JacobiSVD<Matrix>(m).singularValues();
    s = std::max(s, sv(0) * sv(0));
  }
  return s;
}

std::vector<double> hanson_wright_tail(const HwInput& input, int trials,
                                       const std::vector<double>& t_grid,
                                       std::uint64_t seed) {
  input.validate();
  if (trials < 1) throw ConfigError("hanson_wright: trials < 1");
  const int n = input.n();
  const Index m = input.h.front().cols();
  std::vector<int> exceed(t_grid.size(), 0);
  Rng rng(seed);
  Matrix z(n, input.p());
  Vector w(m);
  for (int t = 0; t < trials; ++t) {
    for (int i = 0; i < n; ++i) {
      for (Index k = 0; k < m; ++k) {
        w(k) = input.dist == NoiseDist::kGaussian ? rng.normal()
                                                  : rng.rademacher();
      }
      z.row(i) = (input.factor(i) * w).transpose();
    }
    const double s = std::abs(hanson_wright_statistic(z, input.a));
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
      if (s > t_grid[k]) ++exceed[k];
    }
  }
  std::vector<double> out(t_grid.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    out[k] = static_cast<double>(exceed[k]) / trials;
  }
  return out;
}

double hanson_wright_exponent(double t, int p, double sigma_sq, double a_fro,
                              double a_op) {
  const double inf = std::numeric_limits<double>::infinity();
  const double quad = a_fro > 0.0 ? t * t / (p * sigma_sq * sigma_sq *
                                             a_fro * a_fro)
                                  : inf;
  const double lin = a_op > 0.0 ? t / (sigma_sq * a_op) : inf;
  return std::min(quad, lin);
}

HwReport verify_hanson_wright(const std::vector<HwInput>& inputs, int trials,
                              const std::vector<double>& multipliers,
                              std::uint64_t seed) {
  if (inputs.empty()) throw ConfigError("verify_hanson_wright: no inputs");
  if (multipliers.empty()) throw ConfigError("verify_hanson_wright: no t");
  HwReport report;
  std::vector<std::vector<double>> exponents;
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const HwInput& in = inputs[k];
    in.validate();
    const double sigma_sq = in.sigma_sq();
    // The statistic ignores the diagonal, so measure A off the diagonal.
    Matrix off = in.a;
    off.diagonal().setZero();
    const double a_fro = off.norm();
    const Vector eig =
        Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (off + off.transpose()),
                                              Eigen::EigenvaluesOnly)
            .eigenvalues();
    const double a_op =
        std::max(std::abs(eig(0)), std::abs(eig(eig.size() - 1)));
    HwSizeReport size;
    size.n = in.n();
    std::vector<double> expo;
    for (double mult : multipliers) {
      const double t = mult * std::sqrt(static_cast<double>(in.p())) *
                       sigma_sq * a_fro;
      size.t.push_back(t);
      expo.push_back(hanson_wright_exponent(t, in.p(), sigma_sq, a_fro, a_op));
    }
    size.empirical = hanson_wright_tail(in, trials, size.t,
                                        derive_seed(seed, {k}));
    exponents.push_back(std::move(expo));
    report.sizes.push_back(std::move(size));
  }

  double c = std::numeric_limits<double>::infinity();
  const HwSizeReport& first = report.sizes.front();
  for (std::size_t j = 0; j < first.t.size(); ++j) {
    const double e = first.empirical[j];
    const double x = exponents.front()[j];
    if (e > 0.0 && std::isfinite(x) && x > 0.0) {
      c = std::min(c, std::max(0.0, -std::log(e / 2.0)) / x);
    }
  }
  if (!std::isfinite(c)) c = std::numeric_limits<double>::max();
  report.fitted_c = c;

  for (std::size_t k = 0; k < report.sizes.size(); ++k) {
    HwSizeReport& size = report.sizes[k];
    size.bound.resize(size.t.size());
    size.tolerance.resize(size.t.size());
    size.dominated = true;
    for (std::size_t j = 0; j < size.t.size(); ++j) {
      const double b = std::min(1.0, 2.0 * std::exp(-c * exponents[k][j]));
      size.bound[j] = b;
      // The envelope is fitted on one sample and checked on another.
      size.tolerance[j] = 3.0 * std::sqrt(2.0 * b * (1.0 - b) / trials);
      if (size.empirical[j] > b + size.tolerance[j]) size.dominated = false;
    }
    if (k > 0 && !size.dominated) report.dominated = false;
  }
  return report;
}

}  // namespace popcut
