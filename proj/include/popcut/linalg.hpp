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

#ifndef POPCUT_LINALG_HPP_
#define POPCUT_LINALG_HPP_

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace popcut {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
// Membership labels in {-1, +1}.
using Labels = Eigen::VectorXi;
using Index = Eigen::Index;

// Invalid model, plan or problem description. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure inside a solver (NaN, breakdown). Maps to CLI exit code 3.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// Applies a symmetric n x n operator to a block of column vectors.
using BlockApply = std::function<Matrix(const Matrix&)>;

BlockApply dense_apply(const Matrix& m);

struct EigenPair {
  double value = 0.0;
  Vector vector;
  int iterations = 0;
  bool converged = false;
};

// Power iteration for the dominant eigenpair of a symmetric PSD operator.
// Stops when ||Av - rho v|| <= rel_tol * |rho|. The start vector is a fixed
// pseudo-random vector, so results are deterministic.
EigenPair power_iteration(const BlockApply& op, Index n, double rel_tol,
                          int max_iters);

// Same, restricted to the orthogonal complement of `deflate` (unit norm).
EigenPair power_iteration_deflated(const BlockApply& op, Index n,
                                   const Vector& deflate, double rel_tol,
                                   int max_iters);

// ||A||_2 of a symmetric (possibly indefinite) operator, by power iteration
// on A^2.
double spectral_norm(const BlockApply& op, Index n, double rel_tol,
                     int max_iters);

struct EigenBlock {
  Vector values;   // descending
  Matrix vectors;  // n x k, orthonormal columns
};

// Approximate top-k (largest algebraic) eigenpairs by shifted subspace
// iteration followed by Rayleigh-Ritz.
EigenBlock top_eigenvectors(const BlockApply& op, Index n, Index k,
                            int iterations, std::uint64_t seed);

// Flips v so that its first entry with |v_i| > tol is positive.
void make_first_nonzero_positive(Vector& v, double tol = 0.0);

// Normalizes each row of v to unit Euclidean norm. Zero rows become e_1.
void normalize_rows(Matrix& v);

}  // namespace popcut

#endif  // POPCUT_LINALG_HPP_
