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

#include "popcut/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace popcut {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
T require(const json& obj, const char* key) {
  if (!obj.contains(key)) {
    throw ConfigError(std::string("missing key '") + key + "'");
  }
  return get_or<T>(obj, key, T{});
}

Vector to_vector(const json& arr, const char* key) {
  if (!arr.is_array()) throw ConfigError(std::string(key) + ": expected array");
  Vector v(static_cast<Index>(arr.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = arr[i].get<double>();
  return v;
}

Matrix to_matrix(const json& arr, const char* key) {
  if (!arr.is_array() || arr.empty()) {
    throw ConfigError(std::string(key) + ": expected nonempty array of rows");
  }
  const Index rows = static_cast<Index>(arr.size());
  const Index cols = static_cast<Index>(arr[0].size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    if (!arr[i].is_array() || static_cast<Index>(arr[i].size()) != cols) {
      throw ConfigError(std::string(key) + ": ragged rows");
    }
    for (Index j = 0; j < cols; ++j) m(i, j) = arr[i][j].get<double>();
  }
  return m;
}

json from_vector(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json from_matrix(const Matrix& m) {
  json arr = json::array();
  for (Index i = 0; i < m.rows(); ++i) arr.push_back(from_vector(m.row(i)));
  return arr;
}

NoiseDist parse_dist(const std::string& s) {
  if (s == "gaussian") return NoiseDist::kGaussian;
  if (s == "rademacher") return NoiseDist::kRademacher;
  throw ConfigError("unknown noise distribution '" + s + "'");
}

const char* dist_name(NoiseDist d) {
  return d == NoiseDist::kGaussian ? "gaussian" : "rademacher";
}

ModelTemplate parse_model(const json& m) {
  if (!m.is_object()) throw ConfigError("model: expected object");
  const auto kind = require<std::string>(m, "kind");
  ModelTemplate t;
  t.w1 = get_or<double>(m, "w1", 0.5);
  t.dist = parse_dist(get_or<std::string>(m, "noise", "gaussian"));
  if (kind == "bernoulli") {
    reject_unknown(m, {"kind", "w1", "noise", "f1", "f2", "f3", "alpha", "eps",
                       "m1", "m2"},
                   "model");
    BernoulliConfig b;
    b.f1 = get_or<double>(m, "f1", b.f1);
    b.f2 = get_or<double>(m, "f2", b.f2);
    b.f3 = get_or<double>(m, "f3", b.f3);
    b.alpha = get_or<double>(m, "alpha", b.alpha);
    b.eps = get_or<double>(m, "eps", b.eps);
    b.m1 = get_or<double>(m, "m1", b.m1);
    b.m2 = get_or<double>(m, "m2", b.m2);
    t.family = b;
  } else if (kind == "factor") {
    reject_unknown(m, {"kind", "w1", "noise", "gamma", "h1_scale", "h2_scale"},
                   "model");
    FactorTemplate f;
    f.gamma = require<double>(m, "gamma");
    f.h1_scale = get_or<double>(m, "h1_scale", f.h1_scale);
    f.h2_scale = get_or<double>(m, "h2_scale", f.h2_scale);
    t.family = f;
  } else if (kind == "factor_explicit") {
    reject_unknown(m, {"kind", "w1", "noise", "mu1", "mu2", "h1", "h2"},
                   "model");
    FactorModelConfig f;
    for (const char* key : {"mu1", "mu2", "h1", "h2"}) {
      if (!m.contains(key)) {
        throw ConfigError(std::string("model: missing key '") + key + "'");
      }
    }
    f.mu1 = to_vector(m.at("mu1"), "mu1");
    f.mu2 = to_vector(m.at("mu2"), "mu2");
    f.h1 = to_matrix(m.at("h1"), "h1");
    f.h2 = to_matrix(m.at("h2"), "h2");
    f.w1 = t.w1;
    f.validate();
    t.family = f;
  } else {
    throw ConfigError("model: unknown kind '" + kind + "'");
  }
  return t;
}

json model_to_json(const ModelTemplate& t) {
  json m;
  m["w1"] = t.w1;
  m["noise"] = dist_name(t.dist);
  if (const auto* b = std::get_if<BernoulliConfig>(&t.family)) {
    m["kind"] = "bernoulli";
    m["f1"] = b->f1;
    m["f2"] = b->f2;
    m["f3"] = b->f3;
    m["alpha"] = b->alpha;
    m["eps"] = b->eps;
    m["m1"] = b->m1;
    m["m2"] = b->m2;
  } else if (const auto* f = std::get_if<FactorTemplate>(&t.family)) {
    m["kind"] = "factor";
    m["gamma"] = f->gamma;
    m["h1_scale"] = f->h1_scale;
    m["h2_scale"] = f->h2_scale;
  } else {
    const auto& e = std::get<FactorModelConfig>(t.family);
    m["kind"] = "factor_explicit";
    m["mu1"] = from_vector(e.mu1);
    m["mu2"] = from_vector(e.mu2);
    m["h1"] = from_matrix(e.h1);
    m["h2"] = from_matrix(e.h2);
  }
  return m;
}

std::vector<int> parse_int_list(const json& obj, const char* key) {
  const auto v = require<std::vector<int>>(obj, key);
  if (v.empty()) throw ConfigError(std::string(key) + ": must be nonempty");
  return v;
}

}  // namespace

const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::kSdp1:
      return "sdp1";
    case Estimator::kBalanced:
      return "balanced";
    case Estimator::kSpectral:
      return "spectral";
  }
  return "unknown";
}

Estimator parse_estimator(const std::string& name) {
  if (name == "sdp1") return Estimator::kSdp1;
  if (name == "balanced") return Estimator::kBalanced;
  if (name == "spectral") return Estimator::kSpectral;
  throw ConfigError("unknown estimator '" + name + "'");
}

MixtureSpec ModelTemplate::at(int n, int p) const {
  MixtureSpec spec;
  spec.n = n;
  spec.w1 = w1;
  spec.dist = dist;
  if (const auto* b = std::get_if<BernoulliConfig>(&family)) {
    BernoulliConfig cfg = *b;
    cfg.p = p;
    spec.model = cfg;
  } else if (const auto* f = std::get_if<FactorTemplate>(&family)) {
    spec.model = f->instantiate(p, w1);
  } else {
    FactorModelConfig cfg = std::get<FactorModelConfig>(family);
    if (cfg.dim() != p) {
      throw ConfigError("explicit factor model has p = " +
                        std::to_string(cfg.dim()) + ", grid asks for " +
                        std::to_string(p));
    }
    cfg.w1 = w1;
    spec.model = cfg;
  }
  spec.validate();
  return spec;
}

int ExperimentPlan::grid_size() const {
  return static_cast<int>(n_grid.size() * p_grid.size());
}

int ExperimentPlan::grid_n(int grid_index) const {
  return n_grid.at(grid_index % n_grid.size());
}

int ExperimentPlan::grid_p(int grid_index) const {
  return p_grid.at(grid_index / n_grid.size());
}

void ExperimentPlan::validate() const {
  if (config_id.empty() ||
      config_id.find_first_of(",\"\r\n") != std::string::npos) {
    throw ConfigError("plan: config_id must be nonempty without commas, "
                      "quotes or newlines");
  }
  if (trials < 1) throw ConfigError("plan: trials must be >= 1");
  if (n_grid.empty() || p_grid.empty()) {
    throw ConfigError("plan: grids must be nonempty");
  }
  if (estimators.empty()) throw ConfigError("plan: no estimators");
  std::set<Estimator> seen(estimators.begin(), estimators.end());
  if (seen.size() != estimators.size()) {
    throw ConfigError("plan: duplicate estimator");
  }
  if (threads < 1) throw ConfigError("plan: threads must be >= 1");
  for (int i = 0; i < grid_size(); ++i) model.at(grid_n(i), grid_p(i));
  SdpProblem probe{SymmetricCost::dense(Matrix::Zero(1, 1)), false, 0, solver};
  probe.validate();
}

ExperimentPlan parse_plan(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: expected an object");
  reject_unknown(root,
                 {"config_id", "model", "n_grid", "p_grid", "estimators",
                  "trials", "master_seed", "out_path", "threads",
                  "record_timing", "solver"},
                 "config");
  ExperimentPlan plan;
  plan.config_id = get_or<std::string>(root, "config_id", plan.config_id);
  if (!root.contains("model")) throw ConfigError("config: missing 'model'");
  plan.model = parse_model(root.at("model"));
  plan.n_grid = parse_int_list(root, "n_grid");
  plan.p_grid = parse_int_list(root, "p_grid");
  for (const auto& name : require<std::vector<std::string>>(root, "estimators")) {
    plan.estimators.push_back(parse_estimator(name));
  }
  plan.trials = get_or<int>(root, "trials", plan.trials);
  plan.master_seed = get_or<std::uint64_t>(root, "master_seed", 0);
  plan.out_path = get_or<std::string>(root, "out_path", "");
  plan.threads = get_or<int>(root, "threads", plan.threads);
  plan.record_timing = get_or<bool>(root, "record_timing", plan.record_timing);
  if (root.contains("solver")) {
    const json& s = root.at("solver");
    if (!s.is_object()) throw ConfigError("solver: expected object");
    reject_unknown(s, {"max_iters", "grad_tol", "penalty_period", "balance_tol"},
                   "solver");
    plan.solver.max_iters = get_or<int>(s, "max_iters", plan.solver.max_iters);
    plan.solver.grad_tol = get_or<double>(s, "grad_tol", plan.solver.grad_tol);
    plan.solver.penalty_period =
        get_or<int>(s, "penalty_period", plan.solver.penalty_period);
    plan.solver.balance_tol =
        get_or<double>(s, "balance_tol", plan.solver.balance_tol);
  }
  plan.solver.record_trace = false;
  plan.validate();
  return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_plan(ss.str());
}

std::string plan_to_json(const ExperimentPlan& plan) {
  json root;
  root["config_id"] = plan.config_id;
  root["model"] = model_to_json(plan.model);
  root["n_grid"] = plan.n_grid;
  root["p_grid"] = plan.p_grid;
  json est = json::array();
  for (Estimator e : plan.estimators) est.push_back(estimator_name(e));
  root["estimators"] = est;
  root["trials"] = plan.trials;
  root["master_seed"] = plan.master_seed;
  root["out_path"] = plan.out_path.string();
  root["threads"] = plan.threads;
  root["record_timing"] = plan.record_timing;
  root["solver"] = {{"max_iters", plan.solver.max_iters},
                    {"grad_tol", plan.solver.grad_tol},
                    {"penalty_period", plan.solver.penalty_period},
                    {"balance_tol", plan.solver.balance_tol}};
  return root.dump(2);
}

}  // namespace popcut
