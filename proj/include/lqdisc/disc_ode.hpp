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

#include "lqdisc/butcher.hpp"
#include "lqdisc/model.hpp"

namespace lqdisc {

/// Accumulators of the fixed-step matrix ODE iteration after k steps.
struct OdeState {
  long k = 0;
  Matrix a_k;
  Matrix b_k;
  Matrix gamma_k;
  Matrix q_k;
  Matrix m_k;
  Matrix r_k;
  /// Integral of tr(C_c' Q_c C_c R_ww(t)) over the elapsed time.
  double noise_trace = 0.0;
};

/// Run n_steps updates from A=I, B=0, Gamma=I, Q=M=R=0 using precomputed coefficients.
OdeState integrate_ode(const ContinuousLqModel& model, const ButcherTableau& tab,
                       const PrecomputedCoefficients& pc, long n_steps);

/**
 * Discrete equivalent by fixed-step integration with the given scheme.
 *
 * Throws DivergenceError (naming the step) if any accumulator becomes
 * non-finite.
 */
DiscreteLqModel discretize_ode(const ContinuousLqModel& model, Scheme scheme, long n_steps);

/// Same run, also returning the noise-trace quadrature for the expected cost.
DiscreteLqModel discretize_ode(const ContinuousLqModel& model, Scheme scheme, long n_steps,
                               double& noise_trace);

}  // namespace lqdisc
