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

#ifndef POPCUT_MIXTURE_MODEL_HPP_
#define POPCUT_MIXTURE_MODEL_HPP_

#include <cstdint>
#include <variant>

#include "popcut/linalg.hpp"

namespace popcut {

// Two populations of independent Bernoulli features split into three blocks.
// Block 1 and 2 means are (1 +/- alpha)/2 + eps/2 with the sign swapped
// between populations; block 3 has means m1 (population 1) and m2
// (population 2).
struct BernoulliConfig {
  int p = 0;
  double f1 = 0.5;
  double f2 = 0.5;
  double f3 = 0.0;
  double alpha = 0.04;
  double eps = 0.004;
  double m1 = 0.0;
  double m2 = 0.0;

  // Throws ConfigError.
  void validate() const;
  // Feature index boundaries [0, b1), [b1, b2), [b2, p).
  int block1_end() const;
  int block2_end() const;
  // Entrywise means of population 1 (group = 1) or 2 (group = 2).
  Vector means(int group) const;
};

// Rows of cluster i are mu_i + H_i W with W isotropic, independent entries.
struct FactorModelConfig {
  Vector mu1;
  Vector mu2;
  Matrix h1;  // p x m
  Matrix h2;  // p x m
  double w1 = 0.5;

  void validate() const;
  Index dim() const { return mu1.size(); }
};

// Isotropic factor model family, instantiable at any dimension p:
// mu1 = +sqrt(gamma)/2 * 1_p, mu2 = -mu1, H_i = scale_i * I_p.
struct FactorTemplate {
  double gamma = 0.0;
  double h1_scale = 1.0;
  double h2_scale = 1.0;

  FactorModelConfig instantiate(int p, double w1) const;
};

enum class NoiseDist { kGaussian, kRademacher };

// A fully specified generative model at a given sample size.
struct MixtureSpec {
  std::variant<BernoulliConfig, FactorModelConfig> model;
  int n = 0;
  double w1 = 0.5;
  NoiseDist dist = NoiseDist::kGaussian;

  void validate() const;
  int dim() const;
};

struct PopulationStats {
  double gamma = 0.0;
  double delta_sq = 0.0;  // gamma * p
  double v1 = 0.0;        // tr Cov(Z_j), j in cluster 1
  double v2 = 0.0;
  double sigma_max_sq = 0.0;
  double snr = 0.0;       // s^2 with C_0 = 1
  int n = 0;
  int p = 0;
  int n1 = 0;
  int n2 = 0;

  // Realized weights n_i / n.
  double w1() const { return static_cast<double>(n1) / n; }
  double w2() const { return static_cast<double>(n2) / n; }
};

struct LabeledSample {
  Matrix x;       // n x p, first n1 rows from cluster 1
  Labels labels;  // u_2
  PopulationStats stats;
};

// n1 = round(w1 * n), ties upward. Throws ConfigError if either cluster
// would be empty.
int cluster_size(double w1, int n);

// s^2 = min(delta_sq / sigma_max_sq, n p gamma^2 / sigma_max_sq^2).
double snr(double delta_sq, double gamma, int n, int p, double sigma_max_sq);

PopulationStats population_stats(const MixtureSpec& spec);

LabeledSample generate_bernoulli(const BernoulliConfig& cfg, int n, double w1,
                                 std::uint64_t seed);
LabeledSample generate_factor(const FactorModelConfig& cfg, int n,
                              NoiseDist dist, std::uint64_t seed);
LabeledSample generate(const MixtureSpec& spec, std::uint64_t seed);

// Ground-truth vector u_2 with n1 leading +1 entries.
Labels membership_vector(int n, int n1);

}  // namespace popcut

#endif  // POPCUT_MIXTURE_MODEL_HPP_
