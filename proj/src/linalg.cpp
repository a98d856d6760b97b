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

#include "popcut/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "popcut/rng.hpp"

namespace popcut {
namespace {

constexpr std::uint64_t kStartSeed = 0x5eed5eed2024ULL;

Vector start_vector(Index n, std::uint64_t stream) {
  Rng rng(derive_seed(kStartSeed, {stream}));
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = rng.normal();
  return v.normalized();
}

Matrix orthonormalize(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

EigenPair run_power(const BlockApply& op, Index n, const Vector* deflate,
                    double rel_tol, int max_iters) {
  EigenPair out;
  Vector v = start_vector(n, deflate != nullptr ? 1 : 0);
  auto project = [&](Vector& x) {
    if (deflate != nullptr) x -= deflate->dot(x) * (*deflate);
  };
  project(v);
  double vn = v.norm();
  if (vn == 0.0) {
    out.vector = v;
    out.converged = true;
    return out;
  }
  v /= vn;
  for (int it = 1; it <= max_iters; ++it) {
    Vector w = op(v);
    project(w);
    const double rho = v.dot(w);
    const double resid = (w - rho * v).norm();
    out.iterations = it;
    out.value = rho;
    const double wn = w.norm();
    if (wn == 0.0) {
      out.converged = true;
      break;
    }
    if (!std::isfinite(wn)) {
      throw SolverError("power iteration: non-finite operator output");
    }
    if (resid <= rel_tol * std::abs(rho)) {
      out.converged = true;
      break;
    }
    v = w / wn;
  }
  out.vector = v;
  return out;
}

}  // namespace

BlockApply dense_apply(const Matrix& m) {
  return [&m](const Matrix& x) -> Matrix { return m * x; };
}

EigenPair power_iteration(const BlockApply& op, Index n, double rel_tol,
                          int max_iters) {
  return run_power(op, n, nullptr, rel_tol, max_iters);
}

EigenPair power_iteration_deflated(const BlockApply& op, Index n,
                                   const Vector& deflate, double rel_tol,
                                   int max_iters) {
  return run_power(op, n, &deflate, rel_tol, max_iters);
}

double spectral_norm(const BlockApply& op, Index n, double rel_tol,
                     int max_iters) {
  BlockApply squared = [&op](const Matrix& x) -> Matrix { return op(op(x)); };
  EigenPair top = run_power(squared, n, nullptr, rel_tol, max_iters);
  return std::sqrt(std::max(top.value, 0.0));
}

EigenBlock top_eigenvectors(const BlockApply& op, Index n, Index k,
                            int iterations, std::uint64_t seed) {
  k = std::min(k, n);
  EigenBlock out;
  if (n <= 96 || k * 3 >= n) {
    Matrix dense = op(Matrix::Identity(n, n));
    dense = 0.5 * (dense + dense.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Matrix> es(dense);
    out.values = es.eigenvalues().reverse().head(k);
    out.vectors = es.eigenvectors().rowwise().reverse().leftCols(k);
    return out;
  }
  // Shift so the operator is PSD and the largest algebraic eigenvalues are
  // also the largest in magnitude.
  const double shift = spectral_norm(op, n, 1e-3, 30);
  auto shifted = [&](const Matrix& x) -> Matrix {
    return op(x) + shift * x;
  };
  Rng rng(seed);
  Matrix q(n, k);
  for (Index j = 0; j < k; ++j)
    for (Index i = 0; i < n; ++i) q(i, j) = rng.normal();
  q = orthonormalize(q);
  for (int it = 0; it < iterations; ++it) q = orthonormalize(shifted(q));
  Matrix t = q.transpose() * op(q);
  t = 0.5 * (t + t.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> es(t);
  out.values = es.eigenvalues().reverse();
  out.vectors = q * es.eigenvectors().rowwise().reverse();
  return out;
}

void make_first_nonzero_positive(Vector& v, double tol) {
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

void normalize_rows(Matrix& v) {
  for (Index i = 0; i < v.rows(); ++i) {
    const double norm = v.row(i).norm();
    if (norm > 0.0) {
      v.row(i) /= norm;
    } else {
      v.row(i).setZero();
      v(i, 0) = 1.0;
    }
  }
}

}  // namespace popcut
