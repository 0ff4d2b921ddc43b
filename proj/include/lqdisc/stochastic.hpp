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

#include <cstddef>
#include <vector>

#include "lqdisc/butcher.hpp"
#include "lqdisc/model.hpp"

namespace lqdisc {

/**
 * @brief Per-interval Euler-Maruyama operators with a fine step dt = t_s / n_sub.
 *
 * Within one interval, with A_i = (I + dt A_c)^i, B_i = sum_{j<i} A_j dt B_c,
 * the noise-driven deviation at sub-step i is w_i = G_i w where
 * w = [dw_1; ...; dw_n] and block j of G_i is A_{i-j} G_c for j <= i.
 */
struct EmKernel {
  long n_sub = 0;
  double dt = 0.0;
  std::vector<Matrix> a_pow;
  std::vector<Matrix> b_sum;
  /// G_n: end-of-interval noise map (nx x n_sub*nw).
  Matrix g_end;
  /// sum_i dt G_i' Q_ww G_i.
  Matrix k_w;
  /// sum_i dt G_i' Q_ww A_i.
  Matrix l_wx;
  /// sum_i dt G_i' C_c' Q_c (C_c B_i + D_c).
  Matrix l_wu;
  /// sum_i dt G_i' C_c' Q_c.
  Matrix l_wz;
};

EmKernel make_em_kernel(const ContinuousLqModel& model, long n_sub);

/**
 * @brief Cost as a quadratic form in the Gaussian vector y = [x0; W].
 *
 *   phi = 1/2 y' q_big y + q_vec' y + rho,   y ~ N(m_bar, blkdiag(P0, dt I)).
 *
 * The stage cost uses the discrete (Q, q_k, rho_k); sample states follow
 * x_{k+1} = A x_k + B u_k + G_n w_k; the within-interval noise cost is the
 * right-endpoint EM sum of 1/2 w' Q_ww w + (C_c' Q_c ztilde_det)' w.
 */
struct EmReformulation {
  long n_sub = 0;
  double dt = 0.0;
  std::size_t horizon = 0;
  Eigen::Index nx = 0;
  Eigen::Index nw = 0;
  Matrix q_big;
  Vector q_vec;
  double rho = 0.0;
  Vector m_bar;
  Matrix p0;

  Eigen::Index dim() const { return q_big.rows(); }
  /// blkdiag(P0, dt I), materialized.
  Matrix p_bar() const;
};

inline constexpr Eigen::Index kDefaultEmCap = 4096;

/// Total dimension nx + N * n_sub * nw of the stacked Gaussian vector.
Eigen::Index em_dimension(const ContinuousLqModel& model, long n_sub);

/// Throws ResourceError if em_dimension exceeds `cap`.
EmReformulation em_reformulate(const ContinuousLqModel& model, const DiscreteLqModel& disc,
                               long n_sub, Eigen::Index cap = kDefaultEmCap);

struct CostMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance of a quadratic form of a Gaussian vector.
CostMoments cost_moments(const EmReformulation& ref);

/**
 * Same moments without materializing q_big: backward recursion of the
 * conditional mean and variance of the cost-to-go, one interval at a time.
 */
CostMoments streaming_moments(const ContinuousLqModel& model, const DiscreteLqModel& disc,
                              long n_sub);

/// P_{k+1} = A P_k A' + R_ww; returns P_0..P_n.
std::vector<Matrix> propagate_covariance(const DiscreteLqModel& disc, const Matrix& p0,
                                         std::size_t n);

/// Integral over one interval of tr(Q_ww R_ww(t)), by EM with n_sub sub-steps.
double noise_trace_em(const ContinuousLqModel& model, long n_sub);

/// Same integral, accumulated alongside the fixed-step ODE method.
double noise_trace_ode(const ContinuousLqModel& model, Scheme scheme, long n_steps);

/**
 * Certainty-equivalent expected cost: deterministic stage costs along the
 * mean trajectory plus 1/2 [tr(Q Pbar_k) + noise_trace] per interval.
 */
double expected_cost(const ContinuousLqModel& model, const DiscreteLqModel& disc,
                     const Matrix& p0, double noise_trace);

/// As above with noise_trace from classic RK4 at 256 steps.
double expected_cost(const ContinuousLqModel& model, const DiscreteLqModel& disc,
                     const Matrix& p0);

}  // namespace lqdisc
