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

#include "popcut/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace popcut {
namespace {

constexpr double kOpTol = 1e-8;
constexpr int kOpIters = 5000;

}  // namespace

Agreement success_rate(const Labels& pred, const Labels& truth) {
  if (pred.size() != truth.size()) {
    throw ConfigError("success_rate: length mismatch");
  }
  const Index n = pred.size();
  if (n == 0) throw ConfigError("success_rate: empty labels");
  Index agree = 0;
  for (Index i = 0; i < n; ++i) agree += pred(i) == truth(i) ? 1 : 0;
  const Index best = std::max(agree, n - agree);
  Agreement out;
  out.miscount = static_cast<int>(n - best);
  out.success_rate = 1.0 - static_cast<double>(out.miscount) / n;
  return out;
}

ZDistances z_distances(const Matrix& z, const Matrix& zstar) {
  if (z.rows() != zstar.rows() || z.cols() != zstar.cols() ||
      z.rows() != z.cols()) {
    throw ConfigError("z_distances: shape mismatch");
  }
  const double n = static_cast<double>(z.rows());
  const Matrix diff = z - zstar;
  ZDistances out;
  out.l1_rate = diff.cwiseAbs().sum() / (n * n);
  out.fro_rate = diff.norm() / n;
  out.op_rate = spectral_norm(dense_apply(diff), z.rows(), kOpTol, kOpIters) / n;
  return out;
}

ZDistances z_distances_factored(const Matrix& v, const Labels& truth) {
  if (v.rows() != truth.size()) {
    throw ConfigError("z_distances: shape mismatch");
  }
  const Index rows = v.rows();
  const double n = static_cast<double>(rows);
  const Vector u = truth.cast<double>();
  ZDistances out;
  {
    const Matrix z = v * v.transpose();
    out.l1_rate = (z - u * u.transpose()).cwiseAbs().sum() / (n * n);
  }
  const Vector vtu = v.transpose() * u;
  const double fro_sq =
      (v.transpose() * v).squaredNorm() - 2.0 * vtu.squaredNorm() + n * n;
  out.fro_rate = std::sqrt(std::max(fro_sq, 0.0)) / n;
  const BlockApply diff = [&v, &u](const Matrix& x) -> Matrix {
    return v * (v.transpose() * x) - u * (u.transpose() * x);
  };
  out.op_rate = spectral_norm(diff, rows, kOpTol, kOpIters) / n;
  return out;
}

double angle_deg(const Vector& u, const Vector& v) {
  if (u.size() != v.size()) throw ConfigError("angle: length mismatch");
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) throw ConfigError("angle: zero vector");
  const double c = std::clamp(std::abs(u.dot(v)) / (nu * nv), 0.0, 1.0);
  return std::acos(c) * 180.0 / M_PI;
}

double flip_distance_sq(const Vector& x, const Vector& u) {
  return std::min((x - u).squaredNorm(), (x + u).squaredNorm());
}

}  // namespace popcut
