/*
 Copyright 2026 The lqdisc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#pragma once

#include "lqdisc/model.hpp"

namespace lqdisc {

/// Reference integration settings; grid_points must be a power of two >= 256.
struct OracleConfig {
  long grid_points = 1L << 14;
};

/**
 * Integral over [0, t_s] of l_c(z - zbar0), with [x; u] advanced exactly by
 * expm of the extended drift over each sub-interval and the composite
 * trapezoidal rule on the grid.
 */
double oracle_cost(const ContinuousLqModel& model, const Vector& x0, const Vector& u0,
                   const Vector& zbar0, const OracleConfig& cfg = {});

/// Classic RK4 discretization with cfg.grid_points steps.
DiscreteLqModel oracle_discretize(const ContinuousLqModel& model, const OracleConfig& cfg = {});

}  // namespace lqdisc
