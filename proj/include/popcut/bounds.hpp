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

#ifndef POPCUT_BOUNDS_HPP_
#define POPCUT_BOUNDS_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "popcut/config.hpp"
#include "popcut/mixture_model.hpp"

namespace popcut {

// sigma_max^2 (sqrt(n p) v n) + sigma_max n sqrt(p gamma).
double concentration_envelope(const PopulationStats& s);

// ||Y Y^T - E Y Y^T||_2 for a centered sample Y drawn from the model with
// the given statistics.
double gram_deviation_norm(const Matrix& y, const PopulationStats& s);

struct ConcentrationRow {
  int n = 0;
  int p = 0;
  double empirical_max = 0.0;
  double empirical_mean = 0.0;
  double envelope = 0.0;
  double ratio = 0.0;  // empirical_max / envelope
};

struct ConcentrationReport {
  std::vector<ConcentrationRow> rows;
  // Ratio at the first size, used as the reference constant.
  double fitted_constant = 0.0;
  // max_k |ratio_k / fitted_constant - 1|.
  double max_relative_deviation = 0.0;

  bool within(double rel_tol) const {
    return max_relative_deviation <= rel_tol;
  }
};

ConcentrationReport verify_concentration(
    const ModelTemplate& model, const std::vector<std::pair<int, int>>& sizes,
    int trials, std::uint64_t seed);

// sum_{i != j} a_ij <z_i, z_j>.
double hanson_wright_statistic(const Matrix& z, const Matrix& a);

// Rows z_i = H_i w_i. `h` holds one p x m factor shared by all rows or one
// per row.
struct HwInput {
  std::vector<Matrix> h;
  Matrix a;
  NoiseDist dist = NoiseDist::kGaussian;

  void validate() const;
  int n() const { return static_cast<int>(a.rows()); }
  int p() const { return static_cast<int>(h.front().rows()); }
  const Matrix& factor(int i) const { return h.size() == 1 ? h[0] : h[i]; }
  double sigma_sq() const;  // max_i ||H_i||_2^2
};

// Empirical P(|S| > t) for each t.
std::vector<double> hanson_wright_tail(const HwInput& input, int trials,
                                       const std::vector<double>& t_grid,
                                       std::uint64_t seed);

// min(t^2 / (p sigma^4 ||A||_F^2), t / (sigma^2 ||A||_2)).
double hanson_wright_exponent(double t, int p, double sigma_sq, double a_fro,
                              double a_op);

struct HwSizeReport {
  int n = 0;
  std::vector<double> t;
  std::vector<double> empirical;
  std::vector<double> bound;  // 2 exp(-c * exponent) with the fitted c
  std::vector<double> tolerance;  // Monte-Carlo allowance
  bool dominated = true;
};

struct HwReport {
  double fitted_c = 0.0;
  std::vector<HwSizeReport> sizes;
  // Every size after the first satisfies empirical <= bound + tolerance.
  bool dominated = true;
};

// t = k sqrt(p) sigma^2 ||A||_F for each multiplier k. c is the largest
// constant whose envelope dominates the first input's empirical tail; the
// remaining inputs are then checked against that envelope with a
// 3-standard-error Monte-Carlo allowance.
HwReport verify_hanson_wright(const std::vector<HwInput>& inputs, int trials,
                              const std::vector<double>& multipliers,
                              std::uint64_t seed);

}  // namespace popcut

#endif  // POPCUT_BOUNDS_HPP_
