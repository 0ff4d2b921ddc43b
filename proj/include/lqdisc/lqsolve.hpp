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

#include <vector>

#include "lqdisc/model.hpp"

namespace lqdisc {

struct LqSolution {
  VectorSeq u_seq;
  VectorSeq x_seq;
  double value = 0.0;
  /// u_k = gains[k] x_k + feedforward[k].
  std::vector<Matrix> gains;
  VectorSeq feedforward;
};

/**
 * Minimize sum_k 1/2 xi_k' Q xi_k + q_k' xi_k + rho_k, xi_k = [x_k; u_k],
 * subject to x_{k+1} = A x_k + B u_k, with zero terminal cost.
 *
 * Throws ConvexityError if a Hessian block in u is not positive definite.
 */
LqSolution solve_finite_horizon(const DiscreteLqModel& disc, const Vector& x0);

}  // namespace lqdisc
