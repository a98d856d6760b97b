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

#ifndef POPCUT_HARNESS_HPP_
#define POPCUT_HARNESS_HPP_

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "popcut/config.hpp"

namespace popcut {

inline constexpr char kCsvHeader[] =
    "config_id,n,p,gamma,p_gamma,np_gamma_sq,snr,w1,estimator,trial,seed,"
    "success_rate,miscount,theta_deg,phi_deg,l1_rate,fro_rate,op_rate,"
    "diag_residual,balance_residual,converged,wall_ms,error_flag";

// error_flag bits.
inline constexpr int kFlagSolverError = 1;
inline constexpr int kFlagDegenerate = 2;

// Stream index reserved for data generation in derive_seed paths.
inline constexpr std::uint64_t kDataStream = 1000;

struct TrialRecord {
  std::string config_id;
  int grid_index = 0;
  int n = 0;
  int p = 0;
  double gamma = 0.0;
  double p_gamma = 0.0;
  double np_gamma_sq = 0.0;
  double snr = 0.0;
  double w1 = 0.0;  // realized n1 / n
  Estimator estimator = Estimator::kSpectral;
  int trial = 0;
  std::uint64_t seed = 0;
  double success_rate = 0.0;
  int miscount = 0;
  // SDP rows: angle(xhat, u2). Spectral rows: angle(v1, reference vector).
  double theta_deg = 0.0;
  // SDP rows: angle(xhat, v1). NaN for spectral rows.
  double phi_deg = 0.0;
  double l1_rate = 0.0;
  double fro_rate = 0.0;
  double op_rate = 0.0;
  double diag_residual = 0.0;
  double balance_residual = 0.0;
  bool converged = false;
  double wall_ms = 0.0;
  int error_flag = 0;
};

// Seeds used for one trial.
std::uint64_t data_seed(std::uint64_t master, int grid_index, int trial);
std::uint64_t estimator_seed(std::uint64_t master, int grid_index,
                             Estimator e, int trial);

// Runs every (grid point, trial) and returns rows ordered by
// (grid point, estimator in plan order, trial). Deterministic in
// plan.master_seed; independent of plan.threads apart from wall_ms.
std::vector<TrialRecord> run_trials(const ExperimentPlan& plan);

// run_trials followed by writing the CSV to plan.out_path. Throws IoError
// if the file cannot be written.
std::vector<TrialRecord> run_plan(const ExperimentPlan& plan);

std::string format_record(const TrialRecord& r);
void write_csv(std::ostream& os, const std::vector<TrialRecord>& rows);

}  // namespace popcut

#endif  // POPCUT_HARNESS_HPP_
