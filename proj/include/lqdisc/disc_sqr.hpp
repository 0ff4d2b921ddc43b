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

/**
 * @brief Accumulators of the step-doubling recurrences.
 *
 * After i doublings with N = 2^i:
 *   a_t = Lambda^N,  b_t = sum_{l<N} Lambda^l,  gamma_t = Omega^N,
 *   m_t = sum_{l<N} (Omega^l)',  q_t = sum_{l<N} (Omega^l)' Qbar (Omega^l),
 *   r_t = sum_{l<N} Lambda^l Rbar (Lambda^l)'.
 */
struct DoublingState {
  int i = 0;
  Matrix a_t;
  Matrix b_t;
  Matrix gamma_t;
  Matrix m_t;
  Matrix q_t;
  Matrix r_t;
};

/// Initial state (N = 1) for the given coefficients.
DoublingState initial_doubling_state(const PrecomputedCoefficients& pc);

/// One doubling: N -> 2N. Throws DivergenceError if the state becomes non-finite.
void double_once(DoublingState& st);

/// Apply `doublings` doublings to the initial state.
DoublingState run_step_doubling(const PrecomputedCoefficients& pc, int doublings);

/// Discrete equivalent of the fixed-step scheme with N = 2^doublings steps.
DiscreteLqModel discretize_step_doubling(const ContinuousLqModel& model, Scheme scheme,
                                         int doublings);

}  // namespace lqdisc
