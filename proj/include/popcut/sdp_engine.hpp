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

#ifndef POPCUT_SDP_ENGINE_HPP_
#define POPCUT_SDP_ENGINE_HPP_

#include <cstdint>
#include <ostream>
#include <vector>

#include "popcut/linalg.hpp"
#include "popcut/preprocess.hpp"

namespace popcut {

// Symmetric cost matrix, held either densely or as Y Y^T - shift * E_n.
// The factored form applies in O(n p r) instead of O(n^2 r).
class SymmetricCost {
 public:
  static SymmetricCost dense(Matrix c);
  static SymmetricCost gram_minus_ones(Matrix y, double shift);

  Index dim() const;
  bool is_factored() const { return factored_; }
  Matrix apply(const Matrix& v) const;
  Matrix to_dense() const;
  double frobenius_norm() const { return frobenius_; }
  // Relative asymmetry ||C - C^T||_F / ||C||_F (0 for factored costs).
  double asymmetry() const;

 private:
  SymmetricCost() = default;

  bool factored_ = false;
  Matrix dense_;
  Matrix y_;
  double shift_ = 0.0;
  double frobenius_ = 0.0;
};

struct SolverControls {
  int max_iters = 5000;
  double grad_tol = 1e-7;
  // Balanced only: the penalty weight doubles every `penalty_period`
  // iterations until the balance residual reaches `balance_tol`.
  int penalty_period = 50;
  double balance_tol = 1e-6;
  bool record_trace = true;
};

struct SdpProblem {
  SymmetricCost cost;
  bool balanced = false;  // adds <E_n, Z> = 0
  int rank = 0;           // 0 selects max(ceil(sqrt(2n)), 8), capped at n
  SolverControls controls;

  void validate() const;
};

struct TraceEntry {
  int iter = 0;
  double objective = 0.0;   // penalized objective at the current weight
  double grad_norm = 0.0;   // Riemannian gradient norm
  double balance_residual = 0.0;
  double penalty_weight = 0.0;
};

struct SdpSolution {
  Matrix v;                 // n x r, unit rows; Z = V V^T
  double objective = 0.0;   // <C, V V^T>
  double diag_residual = 0.0;
  double balance_residual = 0.0;  // |1^T Z 1| / n^2
  double min_eig = 0.0;     // smallest eigenvalue of Z
  int iters = 0;
  bool converged = false;
  bool restarted = false;
  std::vector<TraceEntry> trace;

  Matrix z() const { return v * v.transpose(); }
};

int default_rank(Index n);

// Low-rank factorized ascent over {V : unit rows}, maximizing <C, V V^T>
// (minus mu (1^T V V^T 1)^2 when balanced). Throws SolverError on NaN.
SdpSolution solve(const SdpProblem& problem, std::uint64_t seed);

// maximize <Y Y^T - lambda E_n, Z> over Z PSD, diag(Z) = I.
SdpSolution sdp1(const CenteredData& data, std::uint64_t seed,
                 const SolverControls& controls = {});
// maximize <Y Y^T, Z> with the extra constraint <E_n, Z> = 0.
SdpSolution balanced_sdp(const CenteredData& data, std::uint64_t seed,
                         const SolverControls& controls = {});

struct Rounding {
  Labels labels;
  Vector xhat;  // top eigenvector of Z, ||xhat|| = sqrt(n)
  bool degenerate = false;
};

// Signs of the top eigenvector of Z = V V^T; sign(0) = +1. The vector is
// oriented so its first nonzero entry is positive.
Rounding round_membership(const SdpSolution& solution);
Rounding round_membership(const Matrix& v);

struct IqpResult {
  Labels x;
  double value = 0.0;
};

// Exact max x^T C x over x in {-1, 1}^n by Gray-code enumeration, n <= 20.
IqpResult brute_force_iqp(const Matrix& c);

void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace);

}  // namespace popcut

#endif  // POPCUT_SDP_ENGINE_HPP_
