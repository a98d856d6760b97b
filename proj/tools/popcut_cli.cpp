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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "popcut/bounds.hpp"
#include "popcut/config.hpp"
#include "popcut/harness.hpp"
#include "popcut/matrix_io.hpp"
#include "popcut/metrics.hpp"
#include "popcut/preprocess.hpp"
#include "popcut/rng.hpp"
#include "popcut/sdp_engine.hpp"
#include "popcut/spectral.hpp"

namespace {

using nlohmann::json;
using namespace popcut;

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

struct Options {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  int threads = 0;
  std::string estimator = "sdp1";
  std::string input;
  std::string labels;
  std::string trace;
  std::string suite = "all";
  int n = 0;
  int p = 0;
  int trials = 0;
};

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream os(out);
  if (!os) throw IoError("cannot write " + out);
  os << j.dump(2) << '\n';
}

int cmd_generate(const Options& o) {
  if (o.config.empty()) throw ConfigError("generate: --config is required");
  if (o.out.empty()) throw ConfigError("generate: --out is required");
  const ExperimentPlan plan = load_plan(o.config);
  const int n = o.n > 0 ? o.n : plan.n_grid.front();
  const int p = o.p > 0 ? o.p : plan.p_grid.front();
  const MixtureSpec spec = plan.model.at(n, p);
  const std::uint64_t seed = o.seed_set ? o.seed : plan.master_seed;
  const LabeledSample sample = generate(spec, seed);
  save_matrix_auto(o.out, sample.x);
  const std::string labels = o.labels.empty() ? o.out + ".labels" : o.labels;
  save_labels(labels, sample.labels);
  const PopulationStats& s = sample.stats;
  json j = {{"n", s.n},         {"p", s.p},
            {"n1", s.n1},       {"n2", s.n2},
            {"gamma", s.gamma}, {"p_gamma", s.delta_sq},
            {"v1", s.v1},       {"v2", s.v2},
            {"snr", s.snr},     {"sigma_max_sq", s.sigma_max_sq},
            {"data", o.out},    {"labels", labels}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_cluster(const Options& o) {
  if (o.input.empty()) throw ConfigError("cluster: --input is required");
  const Matrix x = load_matrix_auto(o.input);
  SolverControls controls;
  if (!o.config.empty()) controls = load_plan(o.config).solver;
  controls.record_trace = !o.trace.empty();
  const CenteredData data = preprocess(x);
  const Estimator e = parse_estimator(o.estimator);
  json j = {{"estimator", estimator_name(e)}, {"n", x.rows()}, {"p", x.cols()}};
  Labels labels;
  if (e == Estimator::kSpectral) {
    const SpectralResult r = spectral_cluster(data);
    labels = r.labels;
    j["eigenvalue"] = r.objective;
    j["split_value"] = r.split_value;
    j["converged"] = r.converged;
    j["degenerate"] = r.degenerate;
  } else {
    const SdpSolution sol = e == Estimator::kSdp1
                                ? sdp1(data, o.seed, controls)
                                : balanced_sdp(data, o.seed, controls);
    const Rounding rd = round_membership(sol);
    labels = rd.labels;
    j["objective"] = sol.objective;
    j["iters"] = sol.iters;
    j["converged"] = sol.converged;
    j["restarted"] = sol.restarted;
    j["diag_residual"] = sol.diag_residual;
    j["balance_residual"] = sol.balance_residual;
    j["degenerate"] = rd.degenerate;
    if (!o.trace.empty()) {
      std::ofstream os(o.trace);
      if (!os) throw IoError("cannot write " + o.trace);
      write_trace_csv(os, sol.trace);
    }
  }
  if (!o.labels.empty()) {
    const Agreement a = success_rate(labels, load_labels(o.labels));
    j["success_rate"] = a.success_rate;
    j["miscount"] = a.miscount;
  }
  if (o.out.empty()) {
    write_labels(std::cout, labels);
  } else {
    save_labels(o.out, labels);
  }
  std::cerr << j.dump() << '\n';
  return 0;
}

int cmd_experiment(const Options& o) {
  if (o.config.empty()) throw ConfigError("experiment: --config is required");
  ExperimentPlan plan = load_plan(o.config);
  if (o.seed_set) plan.master_seed = o.seed;
  if (!o.out.empty()) plan.out_path = o.out;
  if (o.threads > 0) plan.threads = o.threads;
  const auto rows = run_plan(plan);
  int failed = 0;
  for (const auto& r : rows) failed += (r.error_flag & kFlagSolverError) ? 1 : 0;
  std::cerr << "wrote " << rows.size() << " rows to " << plan.out_path.string()
            << " (" << failed << " solver failures)\n";
  return 0;
}

json concentration_json(const ConcentrationReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"p", row.p},
                    {"empirical_max", row.empirical_max},
                    {"empirical_mean", row.empirical_mean},
                    {"envelope", row.envelope},
                    {"ratio", row.ratio}});
  }
  return {{"rows", rows},
          {"fitted_constant", r.fitted_constant},
          {"max_relative_deviation", r.max_relative_deviation},
          {"within_50_percent", r.within(0.5)}};
}

json hw_json(const HwReport& r) {
  json sizes = json::array();
  for (const auto& s : r.sizes) {
    sizes.push_back({{"n", s.n},
                     {"t", s.t},
                     {"empirical", s.empirical},
                     {"bound", s.bound},
                     {"tolerance", s.tolerance},
                     {"dominated", s.dominated}});
  }
  return {{"fitted_c", r.fitted_c}, {"sizes", sizes}, {"dominated", r.dominated}};
}

int cmd_verify_bounds(const Options& o) {
  if (o.suite != "all" && o.suite != "concentration" &&
      o.suite != "hanson-wright") {
    throw ConfigError("verify-bounds: unknown suite '" + o.suite + "'");
  }
  json out;
  const std::uint64_t seed = o.seed_set ? o.seed : 20260101;
  if (o.suite != "hanson-wright") {
    ModelTemplate model;
    model.family = FactorTemplate{0.004, 1.0, 1.0};
    std::vector<std::pair<int, int>> sizes = {
        {64, 64}, {128, 128}, {256, 256}, {512, 512}};
    int trials = 100;
    if (!o.config.empty()) {
      const ExperimentPlan plan = load_plan(o.config);
      model = plan.model;
      trials = plan.trials;
      if (plan.n_grid.size() != plan.p_grid.size()) {
        throw ConfigError("verify-bounds: n_grid and p_grid are paired and "
                          "must have equal length");
      }
      sizes.clear();
      for (std::size_t i = 0; i < plan.n_grid.size(); ++i) {
        sizes.emplace_back(plan.n_grid[i], plan.p_grid[i]);
      }
    }
    if (o.trials > 0) trials = o.trials;
    out["concentration"] =
        concentration_json(verify_concentration(model, sizes, trials, seed));
  }
  if (o.suite != "concentration") {
    const int p = o.p > 0 ? o.p : 16;
    const int trials = o.trials > 0 ? o.trials : 4000;
    std::vector<HwInput> inputs;
    Rng rng(derive_seed(seed, {7}));
    for (int n : {32, 64, 128}) {
      Matrix a(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.normal();
      inputs.push_back({{Matrix::Identity(p, p)}, a, NoiseDist::kGaussian});
    }
    out["hanson_wright"] = hw_json(verify_hanson_wright(
        inputs, trials, {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}, seed));
  }
  emit(out, o.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"popcut: two-population clustering by SDP and spectral methods"};
  app.require_subcommand(1);
  Options o;

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option_function<std::uint64_t>(
        "--seed",
        [&](const std::uint64_t& s) {
          o.seed = s;
          o.seed_set = true;
        },
        "Seed (master seed for experiments)");
  };

  auto* gen = app.add_subcommand("generate", "Emit a sample and its labels");
  gen->add_option("--config", o.config, "Plan file providing the model")
      ->required();
  gen->add_option("--out", o.out, "Data matrix path (.csv or binary)")
      ->required();
  gen->add_option("--labels", o.labels, "Labels path (default <out>.labels)");
  gen->add_option("--n", o.n, "Sample size (default first n_grid entry)");
  gen->add_option("--p", o.p, "Dimension (default first p_grid entry)");
  add_seed(gen);

  auto* clu = app.add_subcommand("cluster", "Cluster one data matrix");
  clu->add_option("--input", o.input, "Data matrix path")->required();
  clu->add_option("--estimator", o.estimator, "sdp1 | balanced | spectral");
  clu->add_option("--out", o.out, "Labels output path (default stdout)");
  clu->add_option("--labels", o.labels, "Ground-truth labels for scoring");
  clu->add_option("--config", o.config, "Plan file providing solver controls");
  clu->add_option("--trace", o.trace, "Solver trace CSV path");
  add_seed(clu);

  auto* exp = app.add_subcommand("experiment", "Run a plan and write its CSV");
  exp->add_option("--config", o.config, "Plan file")->required();
  exp->add_option("--out", o.out, "Override out_path");
  exp->add_option("--threads", o.threads, "Override worker count");
  add_seed(exp);

  auto* vb = app.add_subcommand("verify-bounds",
                                "Concentration and Hanson-Wright suites");
  vb->add_option("--suite", o.suite, "all | concentration | hanson-wright");
  vb->add_option("--config", o.config,
                 "Plan whose model, paired (n_grid, p_grid) and trials drive "
                 "the concentration suite");
  vb->add_option("--trials", o.trials, "Override trial count");
  vb->add_option("--p", o.p, "Hanson-Wright dimension (default 16)");
  vb->add_option("--out", o.out, "Report path (default stdout)");
  add_seed(vb);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (gen->parsed()) return cmd_generate(o);
    if (clu->parsed()) return cmd_cluster(o);
    if (exp->parsed()) return cmd_experiment(o);
    if (vb->parsed()) return cmd_verify_bounds(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
  return kExitConfig;
}
