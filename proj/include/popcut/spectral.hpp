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

#ifndef POPCUT_SPECTRAL_HPP_
#define POPCUT_SPECTRAL_HPP_

#include <span>
#include <vector>

#include "popcut/linalg.hpp"
#include "popcut/preprocess.hpp"

namespace popcut {

struct LeadingEigvec {
  Vector v1;          // unit norm, first nonzero entry positive
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;  // lambda_1 - lambda_2 < 1e-10 lambda_1
};

struct SpectralOptions {
  double rel_tol = 1e-10;
  int max_iters = 20000;
  // Iteration cap for the deflated run that estimates lambda_2.
  int gap_iters = 300;
};

LeadingEigvec leading_eigvec(const Matrix& g, const SpectralOptions& opts = {});
LeadingEigvec leading_eigvec(const BlockApply& op, Index n,
                             const SpectralOptions& opts = {});

// Sum of squared deviations from the mean.
double sse(std::span<const double> values);

// Two-group 1-D k-means cost of the split values[0, split) | values[split, n)
// for values sorted in descending order, with 1 <= split <= n - 1.
// O(1) from the prefix sums.
class SplitCost {
 public:
  explicit SplitCost(std::span<const double> sorted_desc);
  double operator()(Index split) const;
  Index size() const { return static_cast<Index>(sum_.size()) - 1; }

 private:
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
};

double kmeans_cost_1d(std::span<const double> sorted_desc, Index split);

struct SplitChoice {
  Index split = 1;          // size of the left (upper) group
  double threshold = 0.0;   // S_t, the smallest value in the left group
  double cost = 0.0;
};

// Scans splits 1..n-1 and returns the first minimizer.
SplitChoice best_split(std::span<const double> sorted_desc);

struct SpectralResult {
  Vector v1;
  double split_value = 0.0;
  Labels labels;
  double objective = 0.0;
  bool converged = false;
  bool degenerate = false;
};

// P_i = +1 iff v_i >= S_t for the k-means-optimal split of sorted v.
SpectralResult cluster_by_vector(const Vector& v);

SpectralResult spectral_cluster(const CenteredData& data,
                                const SpectralOptions& opts = {});

// Leading eigenvector of the reference matrix for weights realized from
// (w1, n): [w2 1_{n1}, -w1 1_{n2}] / sqrt(w1 w2 n).
Vector reference_leading_vector(double w1, int n);

// Angle in degrees between v1 and the reference leading vector, sign
// invariant.
double angle_to_reference(const Vector& v1, double w1, int n);

}  // namespace popcut

#endif  // POPCUT_SPECTRAL_HPP_
