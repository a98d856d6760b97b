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

#include <gtest/gtest.h>

namespace popcut {
namespace {

const char* kPlan = R"({
  "config_id": "config1",
  "model": {"kind": "bernoulli", "f1": 0.5, "f2": 0.5, "alpha": 0.04,
            "eps": 0.004, "w1": 0.5},
  "n_grid": [50, 100],
  "p_grid": [200],
  "estimators": ["sdp1", "spectral"],
  "trials": 3,
  "master_seed": 18446744073709551615,
  "out_path": "out.csv",
  "threads": 2,
  "record_timing": false,
  "solver": {"max_iters": 100, "grad_tol": 1e-5}
})";

TEST(Config, ParsesFullPlan) {
  const auto p = parse_plan(kPlan);
  EXPECT_EQ(p.config_id, "config1");
  EXPECT_EQ(p.n_grid, (std::vector<int>{50, 100}));
  EXPECT_EQ(p.p_grid, (std::vector<int>{200}));
  ASSERT_EQ(p.estimators.size(), 2u);
  EXPECT_EQ(p.estimators[0], Estimator::kSdp1);
  EXPECT_EQ(p.estimators[1], Estimator::kSpectral);
  EXPECT_EQ(p.trials, 3);
  EXPECT_EQ(p.master_seed, 18446744073709551615ull);
  EXPECT_EQ(p.out_path, "out.csv");
  EXPECT_EQ(p.threads, 2);
  EXPECT_FALSE(p.record_timing);
  EXPECT_EQ(p.solver.max_iters, 100);
  EXPECT_DOUBLE_EQ(p.solver.grad_tol, 1e-5);
  EXPECT_EQ(p.solver.penalty_period, 50);
  const auto& b = std::get<BernoulliConfig>(p.model.family);
  EXPECT_DOUBLE_EQ(b.alpha, 0.04);
  EXPECT_DOUBLE_EQ(b.f3, 0.0);
}

TEST(Config, RoundTripsThroughJson) {
  const auto p = parse_plan(kPlan);
  const auto q = parse_plan(plan_to_json(p));
  EXPECT_EQ(plan_to_json(p), plan_to_json(q));
}

TEST(Config, GridOrderIsPMajor) {
  auto p = parse_plan(kPlan);
  p.p_grid = {10, 20};
  ASSERT_EQ(p.grid_size(), 4);
  EXPECT_EQ(p.grid_n(0), 50);
  EXPECT_EQ(p.grid_p(0), 10);
  EXPECT_EQ(p.grid_n(1), 100);
  EXPECT_EQ(p.grid_p(1), 10);
  EXPECT_EQ(p.grid_n(2), 50);
  EXPECT_EQ(p.grid_p(2), 20);
}

TEST(Config, FactorTemplateAndExplicit) {
  const auto t = parse_plan(R"({"model": {"kind": "factor", "gamma": 0.01,
      "h2_scale": 2.0, "noise": "rademacher", "w1": 0.7},
      "n_grid": [20], "p_grid": [30], "estimators": ["balanced"]})");
  const auto& f = std::get<FactorTemplate>(t.model.family);
  EXPECT_DOUBLE_EQ(f.h2_scale, 2.0);
  EXPECT_EQ(t.model.dist, NoiseDist::kRademacher);
  const auto spec = t.model.at(20, 30);
  EXPECT_EQ(spec.dim(), 30);
  EXPECT_DOUBLE_EQ(spec.w1, 0.7);

  const auto e = parse_plan(R"({"model": {"kind": "factor_explicit",
      "mu1": [1, 0], "mu2": [0, 0], "h1": [[1, 0], [0, 1]],
      "h2": [[2, 0], [0, 2]]},
      "n_grid": [10], "p_grid": [2], "estimators": ["spectral"]})");
  EXPECT_EQ(std::get<FactorModelConfig>(e.model.family).dim(), 2);
  EXPECT_EQ(parse_plan(plan_to_json(e)).model.at(10, 2).dim(), 2);
}

TEST(Config, RejectsInvalidPlans) {
  const auto bad = [](const std::string& json) {
    EXPECT_THROW(parse_plan(json), ConfigError) << json;
  };
  const std::string model = R"("model": {"kind": "factor", "gamma": 0.01})";
  bad("not json");
  bad("[1, 2]");
  bad("{" + model + R"(, "n_grid": [], "p_grid": [5], "estimators": ["sdp1"]})");
  bad("{" + model + R"(, "n_grid": [5], "p_grid": [], "estimators": ["sdp1"]})");
  bad("{" + model + R"(, "n_grid": [5], "p_grid": [5], "estimators": []})");
  bad("{" + model + R"(, "n_grid": [5], "p_grid": [5], "estimators": ["kmeans"]})");
  bad("{" + model + R"(, "n_grid": [5], "p_grid": [5], "estimators": ["sdp1", "sdp1"]})");
  bad("{" + model + R"(, "n_grid": [5], "p_grid": [5], "estimators": ["sdp1"], "trials": 0})");
  bad("{" + model + R"(, "n_grid": [5], "p_grid": [5], "estimators": ["sdp1"], "trails": 3})");
  bad("{" + model + R"(, "n_grid": [1], "p_grid": [5], "estimators": ["sdp1"]})");
  bad("{" + model + R"(, "n_grid": [5], "p_grid": [5], "estimators": ["sdp1"], "config_id": "a,b"})");
  bad("{" + model + R"(, "n_grid": [5], "p_grid": [5], "estimators": ["sdp1"], "solver": {"grad_tol": -1}})");
  bad("{" + model + R"(, "n_grid": [5], "p_grid": [5], "estimators": ["sdp1"], "threads": 0})");
  bad(R"({"model": {"kind": "bernoulli", "f1": 0.9}, "n_grid": [5], "p_grid": [5], "estimators": ["sdp1"]})");
  bad(R"({"model": {"kind": "gmm"}, "n_grid": [5], "p_grid": [5], "estimators": ["sdp1"]})");
  bad(R"({"model": {"kind": "factor_explicit", "mu1": [0], "mu2": [0], "h1": [[1]], "h2": [[1]]}, "n_grid": [5], "p_grid": [3], "estimators": ["sdp1"]})");
  bad(R"({"n_grid": [5], "p_grid": [5], "estimators": ["sdp1"]})");
}

TEST(Config, EstimatorNames) {
  for (Estimator e : {Estimator::kSdp1, Estimator::kBalanced, Estimator::kSpectral}) {
    EXPECT_EQ(parse_estimator(estimator_name(e)), e);
  }
}

}  // namespace
}  // namespace popcut
