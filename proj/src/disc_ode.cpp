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
#include "lqdisc/disc_ode.hpp"

#include "lqdisc/densela.hpp"
#include "lqdisc/errors.hpp"

namespace lqdisc {

OdeState integrate_ode(const ContinuousLqModel& model, const ButcherTableau& tab,
                       const PrecomputedCoefficients& pc, long n_steps) {
  const Eigen::Index nx = model.nx();
  const Eigen::Index nu = model.nu();
  const Eigen::Index nxu = nx + nu;
  const int s = tab.stages;
  const Matrix q_ww = model.noise_weight();
  const Vector stage_weights = tab.a.transpose() * tab.b;

  OdeState st;
  st.a_k = Matrix::Identity(nx, nx);
  st.b_k = Matrix::Zero(nx, nu);
  st.gamma_k = Matrix::Identity(nxu, nxu);
  st.q_k = Matrix::Zero(nxu, nxu);
  st.m_k = Matrix::Zero(nxu, model.nz());
  st.r_k = Matrix::Zero(nx, nx);

  std::vector<Matrix> stage_noise(s);
  for (long k = 0; k < n_steps; ++k) {
    const Matrix noise = st.a_k * pc.r_bar_c * st.a_k.transpose();
    Matrix r_inc = Matrix::Zero(nx, nx);
    double stage_trace = 0.0;
    for (int i = 0; i < s; ++i) {
      stage_noise[i] = pc.lambda_i[i] * noise * pc.lambda_i[i].transpose();
      r_inc += tab.b(i) * stage_noise[i];
      stage_trace += stage_weights(i) * (q_ww.cwiseProduct(stage_noise[i])).sum();
    }
    st.noise_trace += pc.h * ((q_ww.cwiseProduct(st.r_k)).sum() + stage_trace);

    st.r_k = symmetrize(st.r_k + r_inc);
    st.m_k += st.gamma_k.transpose() * pc.m_bar_c;
    st.q_k = symmetrize(st.q_k + st.gamma_k.transpose() * pc.q_bar_c * st.gamma_k);
    st.b_k += pc.theta * (st.a_k * pc.b_bar_c);
    st.a_k = pc.lambda * st.a_k;
    st.gamma_k = pc.omega * st.gamma_k;
    st.k = k + 1;

    if (!st.a_k.allFinite() || !st.b_k.allFinite() || !st.q_k.allFinite() ||
        !st.m_k.allFinite() || !st.r_k.allFinite()) {
      throw DivergenceError("ODE method diverged at step " + std::to_string(st.k) + " of " +
                                std::to_string(n_steps),
                            st.k);
    }
  }
  return st;
}

DiscreteLqModel discretize_ode(const ContinuousLqModel& model, Scheme scheme, long n_steps,
                               double& noise_trace) {
  require_valid(model);
  const ButcherTableau tab = tableau(scheme);
  const PrecomputedCoefficients pc = precompute(model, tab, n_steps);
  OdeState st = integrate_ode(model, tab, pc, n_steps);

  DiscreteLqModel disc;
  disc.a = std::move(st.a_k);
  disc.b = std::move(st.b_k);
  disc.q = std::move(st.q_k);
  disc.m = std::move(st.m_k);
  disc.r_ww = std::move(st.r_k);
  attach_stage_terms(disc, model);
  noise_trace = st.noise_trace;
  return disc;
}

DiscreteLqModel discretize_ode(const ContinuousLqModel& model, Scheme scheme, long n_steps) {
  double unused = 0.0;
  return discretize_ode(model, scheme, n_steps, unused);
}

}  // namespace lqdisc
