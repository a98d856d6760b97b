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

#ifndef POPCUT_CONFIG_HPP_
#define POPCUT_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "popcut/mixture_model.hpp"
#include "popcut/sdp_engine.hpp"

namespace popcut {

enum class Estimator { kSdp1 = 0, kBalanced = 1, kSpectral = 2 };

const char* estimator_name(Estimator e);
// Throws ConfigError for unknown names.
Estimator parse_estimator(const std::string& name);

// Generative model without the sample size. Bernoulli and template factor
// models take p from the plan grid; an explicit factor model has a fixed p.
struct ModelTemplate {
  std::variant<BernoulliConfig, FactorTemplate, FactorModelConfig> family;
  double w1 = 0.5;
  NoiseDist dist = NoiseDist::kGaussian;

  // Throws ConfigError if p is incompatible with the family.
  MixtureSpec at(int n, int p) const;
};

struct ExperimentPlan {
  std::string config_id = "plan";
  ModelTemplate model;
  std::vector<int> n_grid;
  std::vector<int> p_grid;
  std::vector<Estimator> estimators;
  int trials = 1;
  std::uint64_t master_seed = 0;
  std::filesystem::path out_path;
  int threads = 1;
  // When false, wall_ms is written as 0 so reruns are byte-identical.
  bool record_timing = true;
  SolverControls solver;

  // Grid points run p-major: index = ip * |n_grid| + in.
  int grid_size() const;
  int grid_n(int grid_index) const;
  int grid_p(int grid_index) const;

  // Throws ConfigError. Does not touch out_path.
  void validate() const;
};

// Parses the JSON plan format documented in README.md. Unknown keys are
// rejected. Throws ConfigError.
ExperimentPlan parse_plan(const std::string& json_text);
ExperimentPlan load_plan(const std::filesystem::path& path);
std::string plan_to_json(const ExperimentPlan& plan);

}  // namespace popcut

#endif  // POPCUT_CONFIG_HPP_
