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

#ifndef POPCUT_METRICS_HPP_
#define POPCUT_METRICS_HPP_

#include "popcut/linalg.hpp"

namespace popcut {

struct Agreement {
  double success_rate = 0.0;
  int miscount = 0;
};

// Fraction of correctly classified entries, maximized over the global flip.
Agreement success_rate(const Labels& pred, const Labels& truth);

struct ZDistances {
  double l1_rate = 0.0;   // ||Z - Z*||_1 / n^2 (entrywise)
  double fro_rate = 0.0;  // ||Z - Z*||_F / n
  double op_rate = 0.0;   // ||Z - Z*||_2 / n
};

ZDistances z_distances(const Matrix& z, const Matrix& zstar);

// Same quantities for Z = V V^T and Z* = u u^T without forming Z*. The
// operator norm uses the factored difference.
ZDistances z_distances_factored(const Matrix& v, const Labels& truth);

// Angle in degrees, sign invariant, clamped to [0, 90]. Throws ConfigError
// for a zero vector or length mismatch.
double angle_deg(const Vector& u, const Vector& v);

// min over alpha = +/-1 of ||alpha x - u||^2.
double flip_distance_sq(const Vector& x, const Vector& u);

}  // namespace popcut

#endif  // POPCUT_METRICS_HPP_
