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

#ifndef POPCUT_PREPROCESS_HPP_
#define POPCUT_PREPROCESS_HPP_

#include <optional>

#include "popcut/linalg.hpp"
#include "popcut/mixture_model.hpp"

namespace popcut {

// Upper bound on the Grothendieck constant, shown in reports only.
inline constexpr double kGrothendieckBound = 1.783;

// Globally centered data and the matrices built from it. Immutable once
// built.
struct CenteredData {
  Matrix y;             // X - (1/n) E_n X
  Matrix gram;          // Y Y^T
  double tau = 0.0;     // tr(gram) / n
  double lambda = 0.0;  // average off-diagonal gram entry
  Matrix a;             // gram - lambda (E_n - I_n)
  // E[tau] when the generating model is known, otherwise tau. Only shifts
  // objective values; never changes optimizers.
  double b_shift = 0.0;

  Index n() const { return y.rows(); }
  Index p() const { return y.cols(); }
  // Oracle matrix B = A - b_shift I_n.
  Matrix oracle_b() const;
};

struct LambdaTau {
  double lambda = 0.0;
  double tau = 0.0;
};

// Y = X - P_1 X. Throws ConfigError when n < 2.
Matrix center(const Matrix& x);

// lambda from the pairwise average 2/(n(n-1)) sum_{i<j} <Y_i, Y_j>, and
// tau = (1/n) sum_i <Y_i, Y_i>.
// Y Y^T, exactly symmetric.
Matrix gram(const Matrix& y);

LambdaTau lambda_tau(const Matrix& y);
LambdaTau lambda_tau_from_gram(const Matrix& gram);

// A = gram - lambda (E_n - I_n).
Matrix build_a(const Matrix& gram, double lambda);

// E[tau] = (w1 V1 + w2 V2)(n - 1)/n + w1 w2 p gamma, using realized weights.
double expected_tau(const PopulationStats& stats);

CenteredData preprocess(const Matrix& x,
                        const std::optional<PopulationStats>& model = {});

struct ReferenceMatrices {
  Matrix r;      // E(Y) E(Y)^T
  Matrix zstar;  // u_2 u_2^T
};

// Block-form reference matrix with n1 = round(w1 n). Entries use the realized
// weights n_i / n so that 1^T R 1 = 0 holds exactly.
ReferenceMatrices build_reference(double w1, int n, double p_gamma);

struct BiasDiagnostics {
  Matrix w0;
  Matrix w2;
  Matrix wbb;
  // ||E B - R||_2 from the closed-form spectrum of
  // W0 - Wbb - tr(R)/(n-1) (I - E_n/n).
  double eb_minus_r_norm = 0.0;
};

BiasDiagnostics bias_diagnostics(double v1, double v2, double w1, int n,
                                 const Matrix& r);

// Dense assembly of W0 - Wbb - tr(R)/(n-1) (I - E_n/n).
Matrix assemble_bias(const BiasDiagnostics& bias, const Matrix& r);

// E(Y Y^T) = (I - P_1) diag(V_{c(j)}) (I - P_1) + R for independent rows.
Matrix expected_gram(const PopulationStats& stats);

}  // namespace popcut

#endif  // POPCUT_PREPROCESS_HPP_
