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

#include "popcut/sdp_engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "popcut/rng.hpp"

namespace popcut {

SymmetricCost SymmetricCost::dense(Matrix c) {
  if (c.rows() != c.cols()) throw ConfigError("cost matrix must be square");
  SymmetricCost out;
  out.frobenius_ = c.norm();
  out.dense_ = std::move(c);
  return out;
}

SymmetricCost SymmetricCost::gram_minus_ones(Matrix y, double shift) {
  SymmetricCost out;
  out.factored_ = true;
  out.shift_ = shift;
  const Index n = y.rows();
  const Matrix yty = y.transpose() * y;
  const double col_sum_sq = y.colwise().sum().squaredNorm();
  const double fro_sq = yty.squaredNorm() - 2.0 * shift * col_sum_sq +
                        shift * shift * static_cast<double>(n) * n;
  out.frobenius_ = std::sqrt(std::max(fro_sq, 0.0));
  out.y_ = std::move(y);
  return out;
}

Index SymmetricCost::dim() const {
  return factored_ ? y_.rows() : dense_.rows();
}

Matrix SymmetricCost::apply(const Matrix& v) const {
  if (!factored_) return dense_ * v;
  Matrix out = y_ * (y_.transpose() * v);
  if (shift_ != 0.0) {
    const Eigen::RowVectorXd col_sums = v.colwise().sum();
    out.rowwise() -= shift_ * col_sums;
  }
  return out;
}

Matrix SymmetricCost::to_dense() const {
  if (!factored_) return dense_;
  Matrix c = y_ * y_.transpose();
  c.array() -= shift_;
  return c;
}

double SymmetricCost::asymmetry() const {
  if (factored_ || frobenius_ == 0.0) return 0.0;
  return (dense_ - dense_.transpose()).norm() / frobenius_;
}

void SdpProblem::validate() const {
  if (cost.dim() < 1) throw ConfigError("sdp: empty cost matrix");
  if (cost.asymmetry() > 1e-10) throw ConfigError("sdp: cost is not symmetric");
  if (rank < 0) throw ConfigError("sdp: negative rank");
  if (controls.max_iters < 0 || controls.grad_tol < 0 ||
      controls.penalty_period < 1 || controls.balance_tol <= 0) {
    throw ConfigError("sdp: invalid solver controls");
  }
}

int default_rank(Index n) {
  const int bp = static_cast<int>(std::ceil(std::sqrt(2.0 * n)));
  return static_cast<int>(std::min<Index>(n, std::max(bp, 8)));
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 50;
constexpr double kMaxStepRatio = 1e4;

struct Point {
  Matrix v;
  Matrix cv;
  double c_obj = 0.0;  // <C, V V^T>
  Eigen::RowVectorXd col_sums;  // 1^T V
  double balance = 0.0;         // 1^T V V^T 1
  double f = 0.0;               // penalized objective
};

class Ascent {
 public:
  Ascent(const SdpProblem& problem, double step0)
      : problem_(problem),
        n_(problem.cost.dim()),
        step0_(step0),
        grad_floor_(problem.controls.grad_tol *
                    (1.0 + problem.cost.frobenius_norm())) {}

  Point evaluate(Matrix v, double mu) const {
    Point p;
    p.cv = problem_.cost.apply(v);
    p.c_obj = v.cwiseProduct(p.cv).sum();
    p.col_sums = v.colwise().sum();
    p.balance = p.col_sums.squaredNorm();
    p.f = p.c_obj - mu * p.balance * p.balance;
    p.v = std::move(v);
    return p;
  }

  Matrix riemannian_gradient(const Point& p, double mu) const {
    Matrix g = 2.0 * p.cv;
    if (problem_.balanced && mu > 0.0) {
      g.rowwise() -= (4.0 * mu * p.balance) * p.col_sums;
    }
    const Vector radial = g.cwiseProduct(p.v).rowwise().sum();
    g -= radial.asDiagonal() * p.v;
    return g;
  }

  double balance_residual(const Point& p) const {
    return p.balance / (static_cast<double>(n_) * n_);
  }

  struct Outcome {
    Point point;
    int iters = 0;
    bool converged = false;
    bool stalled = false;
    double mu = 0.0;
  };

  Outcome run(Matrix v0, int max_iters, std::vector<TraceEntry>* trace) const {
    const SolverControls& ctl = problem_.controls;
    double mu = problem_.balanced
                    ? std::max(problem_.cost.frobenius_norm(), 1.0) /
                          (static_cast<double>(n_) * n_)
                    : 0.0;
    Outcome out;
    Point cur = evaluate(std::move(v0), mu);
    Matrix prev_v;
    Matrix prev_rg;
    int it = 0;
    for (;; ++it) {
      const Matrix rg = riemannian_gradient(cur, mu);
      const double gnorm = rg.norm();
      if (!std::isfinite(gnorm) || !std::isfinite(cur.f)) {
        std::ostringstream os;
        os << "sdp: non-finite gradient at iteration " << it;
        throw SolverError(os.str());
      }
      const double bres = balance_residual(cur);
      if (trace != nullptr) {
        trace->push_back({it, cur.f, gnorm, bres, mu});
      }
      const bool feasible = !problem_.balanced || bres <= ctl.balance_tol;
      if (gnorm <= grad_floor_ && feasible) {
        out.converged = true;
        break;
      }
      if (it >= max_iters) break;

      // Barzilai-Borwein guess from the previous accepted step, clamped to
      // [1/L, kMaxStepRatio/L], then Armijo halving.
      double step = step0_;
      if (prev_rg.size() > 0) {
        const Matrix s = cur.v - prev_v;
        const double sy = std::abs(s.cwiseProduct(rg - prev_rg).sum());
        if (sy > 0.0) {
          step = std::clamp(s.squaredNorm() / sy, step0_,
                            kMaxStepRatio * step0_);
        }
      }
      bool accepted = false;
      const double gsq = gnorm * gnorm;
      Matrix old_v = cur.v;
      for (int h = 0; h < kMaxHalvings; ++h, step *= 0.5) {
        Matrix trial = cur.v + step * rg;
        normalize_rows(trial);
        Point next = evaluate(std::move(trial), mu);
        if (next.f >= cur.f + kArmijo * step * gsq) {
          cur = std::move(next);
          accepted = true;
          break;
        }
      }
      if (accepted) {
        prev_v = std::move(old_v);
        prev_rg = rg;
      }
      if (!accepted) {
        if (problem_.balanced && !feasible) {
          // The current weight is exhausted; tighten it and keep going.
          mu *= 2.0;
          cur.f = cur.c_obj - mu * cur.balance * cur.balance;
          continue;
        }
        out.stalled = true;
        break;
      }
      if (problem_.balanced && (it + 1) % ctl.penalty_period == 0 &&
          balance_residual(cur) > ctl.balance_tol) {
        mu *= 2.0;
        cur.f = cur.c_obj - mu * cur.balance * cur.balance;
      }
    }
    out.iters = it;
    out.mu = mu;
    out.point = std::move(cur);
    return out;
  }

 private:
  const SdpProblem& problem_;
  Index n_;
  double step0_;
  double grad_floor_;
};

void center_columns(Matrix& v) {
  const Eigen::RowVectorXd mean = v.colwise().mean();
  v.rowwise() -= mean;
}

// Alternating projections onto {1^T V = 0} and {unit rows}.
void restore_balance(Matrix& v) {
  const double n = static_cast<double>(v.rows());
  for (int k = 0; k < 500; ++k) {
    if (v.colwise().sum().squaredNorm() <= 1e-28 * n * n) break;
    center_columns(v);
    normalize_rows(v);
  }
}

Matrix random_block(Index n, Index r, Rng& rng) {
  Matrix m(n, r);
  for (Index j = 0; j < r; ++j)
    for (Index i = 0; i < n; ++i) m(i, j) = rng.normal();
  return m;
}

Matrix spectral_start(const EigenBlock& eig, Index n, Index r, bool balanced,
                      Rng& rng) {
  Vector weights = eig.values.cwiseMax(0.0).cwiseSqrt();
  if (weights.maxCoeff() <= 0.0) weights.setOnes();
  Matrix v = Matrix::Zero(n, r);
  const Index k = std::min<Index>(r, eig.vectors.cols());
  v.leftCols(k) = eig.vectors.leftCols(k) * weights.head(k).asDiagonal();
  const double scale = v.norm() / std::sqrt(static_cast<double>(n * r));
  v += (1e-3 * std::max(scale, 1e-12)) * random_block(n, r, rng);
  if (balanced) center_columns(v);
  normalize_rows(v);
  return v;
}

Matrix rank_one_lift(const EigenBlock& eig, Index n, Index r, bool balanced,
                     Rng& rng) {
  Matrix v = 1e-2 * random_block(n, r, rng);
  for (Index i = 0; i < n; ++i) v(i, 0) += eig.vectors(i, 0) >= 0 ? 1.0 : -1.0;
  if (balanced) center_columns(v);
  normalize_rows(v);
  return v;
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, std::uint64_t seed) {
  problem.validate();
  const Index n = problem.cost.dim();
  const Index r = problem.rank > 0 ? std::min<Index>(problem.rank, n)
                                   : default_rank(n);
  Rng rng(seed);
  const BlockApply op = [&problem](const Matrix& x) -> Matrix {
    return problem.cost.apply(x);
  };

  SdpSolution sol;
  const double c_norm = problem.cost.frobenius_norm();
  const EigenBlock eig = top_eigenvectors(op, n, r, 8, rng.next_u64());
  Matrix v0 = spectral_start(eig, n, r, problem.balanced, rng);

  if (c_norm == 0.0) {
    if (problem.balanced) restore_balance(v0);
    sol.v = std::move(v0);
    sol.converged = true;
  } else {
    const double lipschitz = 2.0 * spectral_norm(op, n, 0.0, 20);
    const Ascent ascent(problem, 1.0 / lipschitz);
    std::vector<TraceEntry>* trace =
        problem.controls.record_trace ? &sol.trace : nullptr;
    Ascent::Outcome best = ascent.run(std::move(v0), problem.controls.max_iters,
                                      trace);
    sol.iters = best.iters;
    if (!best.converged) {
      Matrix v1 = rank_one_lift(eig, n, r, problem.balanced, rng);
      std::vector<TraceEntry> restart_trace;
      Ascent::Outcome second = ascent.run(
          std::move(v1), problem.controls.max_iters,
          problem.controls.record_trace ? &restart_trace : nullptr);
      sol.restarted = true;
      sol.iters += second.iters;
      const bool better =
          (second.converged && !best.converged) ||
          (second.converged == best.converged &&
           second.point.c_obj > best.point.c_obj);
      if (better) {
        best = std::move(second);
        sol.trace = std::move(restart_trace);
      }
    }
    sol.converged = best.converged;
    sol.v = std::move(best.point.v);
    if (problem.balanced) restore_balance(sol.v);
  }

  const Matrix cv = problem.cost.apply(sol.v);
  sol.objective = sol.v.cwiseProduct(cv).sum();
  sol.diag_residual =
      (sol.v.rowwise().squaredNorm().array() - 1.0).abs().maxCoeff();
  sol.balance_residual =
      sol.v.colwise().sum().squaredNorm() / (static_cast<double>(n) * n);
  if (r < n) {
    sol.min_eig = 0.0;
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sol.v.transpose() * sol.v,
                                              Eigen::EigenvaluesOnly);
    sol.min_eig = es.eigenvalues()(0);
  }
  return sol;
}

SdpSolution sdp1(const CenteredData& data, std::uint64_t seed,
                 const SolverControls& controls) {
  SdpProblem problem{
      2 * data.p() < data.n()
          ? SymmetricCost::gram_minus_ones(data.y, data.lambda)
          : SymmetricCost::dense(data.gram.array() - data.lambda),
      false, 0, controls};
  return solve(problem, seed);
}

SdpSolution balanced_sdp(const CenteredData& data, std::uint64_t seed,
                         const SolverControls& controls) {
  SdpProblem problem{2 * data.p() < data.n()
                         ? SymmetricCost::gram_minus_ones(data.y, 0.0)
                         : SymmetricCost::dense(data.gram),
                     true, 0, controls};
  return solve(problem, seed);
}

Rounding round_membership(const Matrix& v) {
  const Index n = v.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(v.transpose() * v);
  const Index r = v.cols();
  const double top = es.eigenvalues()(r - 1);
  Rounding out;
  if (r >= 2) {
    const double second = es.eigenvalues()(r - 2);
    out.degenerate = (top - second) < 1e-8 * std::abs(top) || top <= 0.0;
  } else {
    out.degenerate = top <= 0.0;
  }
  Vector x = v * es.eigenvectors().col(r - 1);
  const double norm = x.norm();
  if (norm > 0.0) x *= std::sqrt(static_cast<double>(n)) / norm;
  make_first_nonzero_positive(x);
  out.xhat = x;
  out.labels.resize(n);
  for (Index i = 0; i < n; ++i) out.labels(i) = x(i) >= 0.0 ? 1 : -1;
  return out;
}

Rounding round_membership(const SdpSolution& solution) {
  return round_membership(solution.v);
}

IqpResult brute_force_iqp(const Matrix& c_in) {
  const Index n = c_in.rows();
  if (n != c_in.cols()) throw ConfigError("iqp: cost must be square");
  if (n < 1 || n > 20) throw ConfigError("iqp: enumeration needs 1 <= n <= 20");
  const Matrix c = 0.5 * (c_in + c_in.transpose());
  Vector x = Vector::Ones(n);
  Vector field = c * x;
  double value = field.sum();
  IqpResult best{x.cast<int>(), value};
  const std::uint64_t count = std::uint64_t{1} << (n - 1);
  for (std::uint64_t k = 1; k < count; ++k) {
    const Index j = std::countr_zero(k) + 1;
    const double xj = x(j);
    value -= 4.0 * xj * (field(j) - c(j, j) * xj);
    field -= 2.0 * xj * c.col(j);
    x(j) = -xj;
    if (value > best.value) {
      best.value = value;
      best.x = x.cast<int>();
    }
  }
  return best;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceEntry>& trace) {
  os << "iter,objective,grad_norm,balance_residual\n";
  os.precision(17);
  for (const TraceEntry& t : trace) {
    os << t.iter << ',' << t.objective << ',' << t.grad_norm << ','
       << t.balance_residual << '\n';
  }
}

}  // namespace popcut
