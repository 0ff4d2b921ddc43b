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

#include <string>
#include <string_view>
#include <vector>

#include "lqdisc/model.hpp"
#include "lqdisc/types.hpp"

namespace lqdisc {

enum class Scheme {
  kExplicitEuler,
  kImplicitEuler,
  kExplicitTrapezoidal,
  kImplicitTrapezoidal,
  kEsdirk34,
  kClassicRk4,
};

inline constexpr Scheme kAllSchemes[] = {
    Scheme::kExplicitEuler,        Scheme::kImplicitEuler, Scheme::kExplicitTrapezoidal,
    Scheme::kImplicitTrapezoidal, Scheme::kEsdirk34,      Scheme::kClassicRk4,
};

/// Canonical name, e.g. "classic_rk4".
std::string_view to_string(Scheme scheme);

/// Inverse of to_string; throws Error(kArgument) on unknown names.
Scheme parse_scheme(std::string_view name);

enum class TableauKind { kExplicit, kDiagonallyImplicit };

struct ButcherTableau {
  int stages = 0;
  Matrix a;
  Vector b;
  Vector c;
  TableauKind kind = TableauKind::kExplicit;
  /// Classical order of the scheme.
  int order = 0;
};

ButcherTableau tableau(Scheme scheme);

/**
 * @brief Step-independent coefficients of a fixed-step Runge-Kutta run.
 *
 * With h = t_s / n_steps, stage i advances A as Lambda_i A_k and the
 * extended transition [[A, B], [0, I]] as Omega_i Gamma_k. The barred
 * matrices fold the quadrature weights and the output map [C_c D_c] in,
 * so each step is a handful of products.
 */
struct PrecomputedCoefficients {
  double h = 0.0;
  Vector weights;
  std::vector<Matrix> lambda_i;
  std::vector<Matrix> theta_i;
  std::vector<Matrix> omega_i;
  Matrix lambda;
  Matrix theta;
  Matrix omega;
  Matrix b_bar_c;
  Matrix m_bar_c;
  Matrix q_bar_c;
  Matrix r_bar_c;
};

/// Throws DivergenceError naming the stage if an implicit stage matrix is singular.
PrecomputedCoefficients precompute(const ContinuousLqModel& model, const ButcherTableau& tab,
                                   long n_steps);

}  // namespace lqdisc
