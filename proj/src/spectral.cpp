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
#include <numeric>

#include "popcut/mixture_model.hpp"

namespace popcut {

LeadingEigvec leading_eigvec(const BlockApply& op, Index n,
                             const SpectralOptions& opts) {
  const EigenPair top = power_iteration(op, n, opts.rel_tol, opts.max_iters);
  LeadingEigvec out;
  out.v1 = top.vector;
  out.value = top.value;
  out.iterations = top.iterations;
  out.converged = top.converged;
  if (n < 2 || top.value <= 0.0) {
    out.degenerate = true;
  } else {
    const EigenPair second =
        power_iteration_deflated(op, n, top.vector, 1e-6, opts.gap_iters);
    out.degenerate = (top.value - second.value) < 1e-10 * top.value;
  }
  make_first_nonzero_positive(out.v1, 1e-12);
  return out;
}

LeadingEigvec leading_eigvec(const Matrix& g, const SpectralOptions& opts) {
  if (g.rows() != g.cols()) throw ConfigError("leading_eigvec: not square");
  return leading_eigvec(dense_apply(g), g.rows(), opts);
}

double sse(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double acc = 0.0;
  for (double x : values) acc += (x - mean) * (x - mean);
  return acc;
}

SplitCost::SplitCost(std::span<const double> sorted_desc)
    : sum_(sorted_desc.size() + 1, 0.0), sum_sq_(sorted_desc.size() + 1, 0.0) {
  for (std::size_t i = 0; i < sorted_desc.size(); ++i) {
    sum_[i + 1] = sum_[i] + sorted_desc[i];
    sum_sq_[i + 1] = sum_sq_[i] + sorted_desc[i] * sorted_desc[i];
  }
}

double SplitCost::operator()(Index split) const {
  const Index n = size();
  if (split < 1 || split > n - 1) {
    throw ConfigError("kmeans split index must lie in [1, n-1]");
  }
  const double left = sum_[split];
  const double right = sum_[n] - left;
  const double left_sq = sum_sq_[split];
  const double right_sq = sum_sq_[n] - left_sq;
  const double cost_left = left_sq - left * left / split;
  const double cost_right = right_sq - right * right / (n - split);
  return std::max(cost_left, 0.0) + std::max(cost_right, 0.0);
}

double kmeans_cost_1d(std::span<const double> sorted_desc, Index split) {
  return SplitCost(sorted_desc)(split);
}

SplitChoice best_split(std::span<const double> sorted_desc) {
  const Index n = static_cast<Index>(sorted_desc.size());
  if (n < 2) throw ConfigError("best_split: need at least two values");
  const SplitCost cost(sorted_desc);
  SplitChoice best;
  best.cost = cost(1);
  for (Index t = 2; t <= n - 1; ++t) {
    const double c = cost(t);
    if (c < best.cost) {
      best.cost = c;
      best.split = t;
    }
  }
  best.threshold = sorted_desc[best.split - 1];
  return best;
}

SpectralResult cluster_by_vector(const Vector& v) {
  std::vector<double> sorted(v.data(), v.data() + v.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const SplitChoice choice = best_split(sorted);
  SpectralResult out;
  out.v1 = v;
  out.split_value = choice.threshold;
  out.objective = choice.cost;
  out.labels.resize(v.size());
  for (Index i = 0; i < v.size(); ++i) {
    out.labels(i) = v(i) >= choice.threshold ? 1 : -1;
  }
  return out;
}

SpectralResult spectral_cluster(const CenteredData& data,
                                const SpectralOptions& opts) {
  const Matrix& y = data.y;
  const BlockApply op =
      2 * data.p() < data.n()
          ? BlockApply([&y](const Matrix& x) -> Matrix {
              return y * (y.transpose() * x);
            })
          : dense_apply(data.gram);
  const LeadingEigvec top = leading_eigvec(op, data.n(), opts);
  SpectralResult out = cluster_by_vector(top.v1);
  out.converged = top.converged;
  out.degenerate = top.degenerate;
  return out;
}

Vector reference_leading_vector(double w1, int n) {
  const int n1 = cluster_size(w1, n);
  const int n2 = n - n1;
  const double rw1 = static_cast<double>(n1) / n;
  const double rw2 = static_cast<double>(n2) / n;
  const double scale = 1.0 / std::sqrt(rw1 * rw2 * n);
  Vector v(n);
  v.head(n1).setConstant(rw2 * scale);
  v.tail(n2).setConstant(-rw1 * scale);
  return v;
}

double angle_to_reference(const Vector& v1, double w1, int n) {
  const Vector ref = reference_leading_vector(w1, n);
  if (v1.size() != n) throw ConfigError("angle_to_reference: length mismatch");
  const double nv = v1.norm();
  if (nv == 0.0) throw ConfigError("angle_to_reference: zero vector");
  const double c = std::min(std::abs(v1.dot(ref)) / nv, 1.0);
  return std::acos(c) * 180.0 / M_PI;
}

}  // namespace popcut
