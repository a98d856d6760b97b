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

#include "popcut/mixture_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "popcut/rng.hpp"

namespace popcut {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

double squared_spectral_norm(const Matrix& h) {
  BlockApply hht = [&h](const Matrix& v) -> Matrix {
    return h * (h.transpose() * v);
  };
  return power_iteration(hht, h.rows(), 1e-12, 20000).value;
}

PopulationStats finish_stats(double delta_sq, double v1, double v2,
                             double sigma_max_sq, int n, int p, double w1) {
  PopulationStats s;
  s.n = n;
  s.p = p;
  s.n1 = cluster_size(w1, n);
  s.n2 = n - s.n1;
  s.gamma = delta_sq / p;
  s.delta_sq = s.gamma * p;
  s.v1 = v1;
  s.v2 = v2;
  s.sigma_max_sq = sigma_max_sq;
  s.snr = snr(s.delta_sq, s.gamma, n, p, sigma_max_sq);
  return s;
}

PopulationStats bernoulli_stats(const BernoulliConfig& cfg, int n, double w1) {
  const Vector q1 = cfg.means(1);
  const Vector q2 = cfg.means(2);
  const Vector var1 = q1.array() * (1.0 - q1.array());
  const Vector var2 = q2.array() * (1.0 - q2.array());
  const double delta_sq = (q1 - q2).squaredNorm();
  const double sigma_max_sq = std::max(var1.maxCoeff(), var2.maxCoeff());
  return finish_stats(delta_sq, var1.sum(), var2.sum(), sigma_max_sq, n, cfg.p,
                      w1);
}

PopulationStats factor_stats(const FactorModelConfig& cfg, int n) {
  const double delta_sq = (cfg.mu1 - cfg.mu2).squaredNorm();
  const double sigma_max_sq =
      std::max(squared_spectral_norm(cfg.h1), squared_spectral_norm(cfg.h2));
  return finish_stats(delta_sq, cfg.h1.squaredNorm(), cfg.h2.squaredNorm(),
                      sigma_max_sq, n, static_cast<int>(cfg.dim()), cfg.w1);
}

}  // namespace

void BernoulliConfig::validate() const {
  require(p >= 1, "bernoulli: p must be >= 1");
  require(f1 >= 0 && f2 >= 0 && f3 >= 0,
          "bernoulli: block fractions must be non-negative");
  require(std::abs(f1 + f2 + f3 - 1.0) <= 1e-12,
          "bernoulli: block fractions must sum to 1");
  for (int g = 1; g <= 2; ++g) {
    const Vector q = means(g);
    if (q.size() > 0) {
      require(q.minCoeff() >= 0.0 && q.maxCoeff() <= 1.0,
              "bernoulli: implied entrywise means must lie in [0, 1]");
    }
  }
}

int BernoulliConfig::block1_end() const {
  return std::clamp(static_cast<int>(std::lround(f1 * p)), 0, p);
}

int BernoulliConfig::block2_end() const {
  return std::clamp(static_cast<int>(std::lround((f1 + f2) * p)),
                    block1_end(), p);
}

Vector BernoulliConfig::means(int group) const {
  const double hi = (1.0 + alpha) / 2.0 + eps / 2.0;
  const double lo = (1.0 - alpha) / 2.0 + eps / 2.0;
  const int b1 = block1_end();
  const int b2 = block2_end();
  Vector q(p);
  for (int j = 0; j < p; ++j) {
    if (j < b1) {
      q(j) = group == 1 ? hi : lo;
    } else if (j < b2) {
      q(j) = group == 1 ? lo : hi;
    } else {
      q(j) = group == 1 ? m1 : m2;
    }
  }
  return q;
}

void FactorModelConfig::validate() const {
  const Index p = mu1.size();
  require(p >= 1, "factor: empty mean vector");
  require(mu2.size() == p, "factor: mu1 and mu2 differ in length");
  require(h1.rows() == p && h2.rows() == p,
          "factor: covariance factors must have p rows");
  require(h1.cols() >= 1 && h1.cols() == h2.cols(),
          "factor: covariance factors must share a column count m >= 1");
  require(h1.norm() > 0 && h2.norm() > 0,
          "factor: covariance factors must be nonzero");
  require(w1 > 0.0 && w1 < 1.0, "factor: w1 must lie in (0, 1)");
}

FactorModelConfig FactorTemplate::instantiate(int p, double w1) const {
  require(p >= 1, "factor template: p must be >= 1");
  require(gamma >= 0.0, "factor template: gamma must be >= 0");
  FactorModelConfig cfg;
  cfg.mu1 = Vector::Constant(p, std::sqrt(gamma) / 2.0);
  cfg.mu2 = -cfg.mu1;
  cfg.h1 = h1_scale * Matrix::Identity(p, p);
  cfg.h2 = h2_scale * Matrix::Identity(p, p);
  cfg.w1 = w1;
  return cfg;
}

void MixtureSpec::validate() const {
  require(n >= 2, "mixture: n must be >= 2");
  require(w1 > 0.0 && w1 < 1.0, "mixture: w1 must lie in (0, 1)");
  cluster_size(w1, n);
  std::visit([](const auto& m) { m.validate(); }, model);
  if (const auto* f = std::get_if<FactorModelConfig>(&model)) {
    require(std::abs(f->w1 - w1) <= 1e-15,
            "mixture: factor model weight disagrees with spec weight");
  }
}

int MixtureSpec::dim() const {
  if (const auto* b = std::get_if<BernoulliConfig>(&model)) return b->p;
  return static_cast<int>(std::get<FactorModelConfig>(model).dim());
}

int cluster_size(double w1, int n) {
  require(w1 > 0.0 && w1 < 1.0, "weight must lie in (0, 1)");
  const int n1 = static_cast<int>(std::floor(w1 * n + 0.5 + 1e-9));
  if (n1 < 1 || n1 > n - 1) {
    std::ostringstream os;
    os << "weight " << w1 << " with n = " << n << " leaves a cluster empty";
    throw ConfigError(os.str());
  }
  return n1;
}

double snr(double delta_sq, double gamma, int n, int p, double sigma_max_sq) {
  if (sigma_max_sq <= 0.0) return 0.0;
  const double a = delta_sq / sigma_max_sq;
  const double b = static_cast<double>(n) * p * gamma * gamma /
                   (sigma_max_sq * sigma_max_sq);
  return std::min(a, b);
}

PopulationStats population_stats(const MixtureSpec& spec) {
  spec.validate();
  if (const auto* b = std::get_if<BernoulliConfig>(&spec.model)) {
    return bernoulli_stats(*b, spec.n, spec.w1);
  }
  return factor_stats(std::get<FactorModelConfig>(spec.model), spec.n);
}

Labels membership_vector(int n, int n1) {
  Labels u(n);
  for (int i = 0; i < n; ++i) u(i) = i < n1 ? 1 : -1;
  return u;
}

LabeledSample generate_bernoulli(const BernoulliConfig& cfg, int n, double w1,
                                 std::uint64_t seed) {
  MixtureSpec spec{cfg, n, w1, NoiseDist::kGaussian};
  LabeledSample out;
  out.stats = population_stats(spec);
  const Vector q1 = cfg.means(1);
  const Vector q2 = cfg.means(2);
  Rng rng(seed);
  out.x.resize(n, cfg.p);
  for (int i = 0; i < n; ++i) {
    const Vector& q = i < out.stats.n1 ? q1 : q2;
    for (int j = 0; j < cfg.p; ++j) out.x(i, j) = rng.bernoulli(q(j)) ? 1.0 : 0.0;
  }
  out.labels = membership_vector(n, out.stats.n1);
  return out;
}

LabeledSample generate_factor(const FactorModelConfig& cfg, int n,
                              NoiseDist dist, std::uint64_t seed) {
  MixtureSpec spec{cfg, n, cfg.w1, dist};
  LabeledSample out;
  out.stats = population_stats(spec);
  const Index m = cfg.h1.cols();
  Rng rng(seed);
  Matrix w(n, m);
  for (int i = 0; i < n; ++i) {
    for (Index k = 0; k < m; ++k) {
      w(i, k) = dist == NoiseDist::kGaussian ? rng.normal() : rng.rademacher();
    }
  }
  const int n1 = out.stats.n1;
  const int n2 = n - n1;
  out.x.resize(n, cfg.dim());
  out.x.topRows(n1) = w.topRows(n1) * cfg.h1.transpose();
  out.x.topRows(n1).rowwise() += cfg.mu1.transpose();
  out.x.bottomRows(n2) = w.bottomRows(n2) * cfg.h2.transpose();
  out.x.bottomRows(n2).rowwise() += cfg.mu2.transpose();
  out.labels = membership_vector(n, n1);
  return out;
}

LabeledSample generate(const MixtureSpec& spec, std::uint64_t seed) {
  spec.validate();
  if (const auto* b = std::get_if<BernoulliConfig>(&spec.model)) {
    return generate_bernoulli(*b, spec.n, spec.w1, seed);
  }
  return generate_factor(std::get<FactorModelConfig>(spec.model), spec.n,
                         spec.dist, seed);
}

}  // namespace popcut
