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

#include "popcut/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "popcut/matrix_io.hpp"
#include "popcut/metrics.hpp"
#include "popcut/preprocess.hpp"
#include "popcut/rng.hpp"
#include "popcut/sdp_engine.hpp"
#include "popcut/spectral.hpp"

namespace popcut {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

TrialRecord base_record(const ExperimentPlan& plan, int grid_index, int trial,
                        const PopulationStats& s, Estimator e) {
  TrialRecord r;
  r.config_id = plan.config_id;
  r.grid_index = grid_index;
  r.n = s.n;
  r.p = s.p;
  r.gamma = s.gamma;
  r.p_gamma = s.delta_sq;
  r.np_gamma_sq = static_cast<double>(s.n) * s.p * s.gamma * s.gamma;
  r.snr = s.snr;
  r.w1 = s.w1();
  r.estimator = e;
  r.trial = trial;
  r.seed = estimator_seed(plan.master_seed, grid_index, e, trial);
  return r;
}

void mark_failed(TrialRecord& r) {
  r.success_rate = kNan;
  r.miscount = -1;
  r.theta_deg = r.phi_deg = kNan;
  r.l1_rate = r.fro_rate = r.op_rate = kNan;
  r.diag_residual = r.balance_residual = kNan;
  r.converged = false;
  r.error_flag |= kFlagSolverError;
}

// Runs all estimators of one (grid point, trial) on a shared sample.
std::vector<TrialRecord> run_one(const ExperimentPlan& plan, int grid_index,
                                 int trial) {
  const MixtureSpec spec =
      plan.model.at(plan.grid_n(grid_index), plan.grid_p(grid_index));
  const LabeledSample sample =
      generate(spec, data_seed(plan.master_seed, grid_index, trial));
  const CenteredData data = preprocess(sample.x, sample.stats);
  const Vector truth = sample.labels.cast<double>();

  std::optional<SpectralResult> spec_result;
  double spec_ms = 0.0;
  {
    const auto t0 = Clock::now();
    try {
      spec_result = spectral_cluster(data);
    } catch (const SolverError&) {
      spec_result.reset();
    }
    spec_ms = elapsed_ms(t0);
  }

  std::vector<TrialRecord> rows;
  for (Estimator e : plan.estimators) {
    TrialRecord r = base_record(plan, grid_index, trial, sample.stats, e);
    if (e == Estimator::kSpectral) {
      r.wall_ms = spec_ms;
      if (!spec_result) {
        mark_failed(r);
      } else {
        const Agreement a = success_rate(spec_result->labels, sample.labels);
        r.success_rate = a.success_rate;
        r.miscount = a.miscount;
        r.theta_deg = angle_to_reference(spec_result->v1, spec.w1, spec.n);
        r.phi_deg = kNan;
        r.l1_rate = r.fro_rate = r.op_rate = kNan;
        r.diag_residual = r.balance_residual = kNan;
        r.converged = spec_result->converged;
        if (spec_result->degenerate) r.error_flag |= kFlagDegenerate;
      }
    } else {
      const auto t0 = Clock::now();
      try {
        const SdpSolution sol =
            e == Estimator::kSdp1 ? sdp1(data, r.seed, plan.solver)
                                  : balanced_sdp(data, r.seed, plan.solver);
        const Rounding rd = round_membership(sol);
        r.wall_ms = elapsed_ms(t0);
        const Agreement a = success_rate(rd.labels, sample.labels);
        r.success_rate = a.success_rate;
        r.miscount = a.miscount;
        r.theta_deg = angle_deg(rd.xhat, truth);
        r.phi_deg = spec_result ? angle_deg(rd.xhat, spec_result->v1) : kNan;
        const ZDistances zd = z_distances_factored(sol.v, sample.labels);
        r.l1_rate = zd.l1_rate;
        r.fro_rate = zd.fro_rate;
        r.op_rate = zd.op_rate;
        r.diag_residual = sol.diag_residual;
        r.balance_residual = sol.balance_residual;
        r.converged = sol.converged;
        if (rd.degenerate) r.error_flag |= kFlagDegenerate;
      } catch (const SolverError&) {
        r.wall_ms = elapsed_ms(t0);
        mark_failed(r);
      }
    }
    if (!plan.record_timing) r.wall_ms = 0.0;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

std::uint64_t data_seed(std::uint64_t master, int grid_index, int trial) {
  return derive_seed(master, {static_cast<std::uint64_t>(grid_index),
                              kDataStream, static_cast<std::uint64_t>(trial)});
}

std::uint64_t estimator_seed(std::uint64_t master, int grid_index, Estimator e,
                             int trial) {
  return derive_seed(master, {static_cast<std::uint64_t>(grid_index),
                              static_cast<std::uint64_t>(e),
                              static_cast<std::uint64_t>(trial)});
}

std::vector<TrialRecord> run_trials(const ExperimentPlan& plan) {
  plan.validate();
  const int grid = plan.grid_size();
  const int trials = plan.trials;
  const int n_est = static_cast<int>(plan.estimators.size());
  const int tasks = grid * trials;
  std::vector<TrialRecord> rows(static_cast<std::size_t>(tasks) * n_est);

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (;;) {
      const int task = next.fetch_add(1);
      if (task >= tasks) return;
      {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (failure) return;
      }
      const int g = task / trials;
      const int t = task % trials;
      try {
        std::vector<TrialRecord> out = run_one(plan, g, t);
        for (int e = 0; e < n_est; ++e) {
          rows[(static_cast<std::size_t>(g) * n_est + e) * trials + t] =
              std::move(out[e]);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const int n_threads = std::max(1, std::min(plan.threads, tasks));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<TrialRecord> run_plan(const ExperimentPlan& plan) {
  if (plan.out_path.empty()) throw ConfigError("plan: out_path is empty");
  plan.validate();
  // Fail fast on an unwritable destination before any computation.
  {
    std::ofstream probe(plan.out_path);
    if (!probe) throw IoError("cannot write " + plan.out_path.string());
  }
  std::vector<TrialRecord> rows = run_trials(plan);
  std::ofstream os(plan.out_path);
  if (!os) throw IoError("cannot write " + plan.out_path.string());
  write_csv(os, rows);
  os.flush();
  if (!os) throw IoError("write failed: " + plan.out_path.string());
  return rows;
}

std::string format_record(const TrialRecord& r) {
  std::ostringstream os;
  const auto f = [](double x) { return format_double(x); };
  os << r.config_id << ',' << r.n << ',' << r.p << ',' << f(r.gamma) << ','
     << f(r.p_gamma) << ',' << f(r.np_gamma_sq) << ',' << f(r.snr) << ','
     << f(r.w1) << ',' << estimator_name(r.estimator) << ',' << r.trial << ','
     << r.seed << ',' << f(r.success_rate) << ',' << r.miscount << ','
     << f(r.theta_deg) << ',' << f(r.phi_deg) << ',' << f(r.l1_rate) << ','
     << f(r.fro_rate) << ',' << f(r.op_rate) << ',' << f(r.diag_residual)
     << ',' << f(r.balance_residual) << ',' << (r.converged ? 1 : 0) << ','
     << f(r.wall_ms) << ',' << r.error_flag;
  return os.str();
}

void write_csv(std::ostream& os, const std::vector<TrialRecord>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) os << format_record(r) << '\n';
}

}  // namespace popcut
