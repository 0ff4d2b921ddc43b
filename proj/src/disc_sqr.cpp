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
#include "lqdisc/disc_sqr.hpp"

#include "lqdisc/densela.hpp"
#include "lqdisc/errors.hpp"

namespace lqdisc {

DoublingState initial_doubling_state(const PrecomputedCoefficients& pc) {
  const Eigen::Index nx = pc.lambda.rows();
  const Eigen::Index nxu = pc.omega.rows();
  DoublingState st;
  st.a_t = pc.lambda;
  st.b_t = Matrix::Identity(nx, nx);
  st.gamma_t = pc.omega;
  st.m_t = Matrix::Identity(nxu, nxu);
  st.q_t = pc.q_bar_c;
  st.r_t = pc.r_bar_c;
  return st;
}

void double_once(DoublingState& st) {
  const Eigen::Index nx = st.a_t.rows();
  const Eigen::Index nxu = st.gamma_t.rows();
  // Half-interval values feed the sums before the transitions are squared.
  st.m_t = st.m_t * (Matrix::Identity(nxu, nxu) + st.gamma_t.transpose());
  st.q_t = symmetrize(st.q_t + st.gamma_t.transpose() * st.q_t * st.gamma_t);
  st.r_t = symmetrize(st.r_t + st.a_t * st.r_t * st.a_t.transpose());
  st.gamma_t = st.gamma_t * st.gamma_t;
  st.b_t = st.b_t * (Matrix::Identity(nx, nx) + st.a_t);
  st.a_t = st.a_t * st.a_t;
  ++st.i;
  if (!st.a_t.allFinite() || !st.b_t.allFinite() || !st.gamma_t.allFinite() ||
      !st.m_t.allFinite() || !st.q_t.allFinite() || !st.r_t.allFinite()) {
    throw DivergenceError("step-doubling diverged at doubling " + std::to_string(st.i) +
                              " (N = 2^" + std::to_string(st.i) + ")",
                          st.i);
  }
}

DoublingState run_step_doubling(const PrecomputedCoefficients& pc, int doublings) {
  DoublingState st = initial_doubling_state(pc);
  while (st.i < doublings) double_once(st);
  return st;
}

DiscreteLqModel discretize_step_doubling(const ContinuousLqModel& model, Scheme scheme,
                                         int doublings) {
  if (doublings < 0 || doublings > 62) {
    throw Error(ErrorKind::kArgument,
                "doubling count must be in [0, 62], got " + std::to_string(doublings));
  }
  require_valid(model);
  const ButcherTableau tab = tableau(scheme);
  const PrecomputedCoefficients pc = precompute(model, tab, 1L << doublings);
  const DoublingState st = run_step_doubling(pc, doublings);

  const Eigen::Index nx = model.nx();
  DiscreteLqModel disc;
  disc.a = st.a_t;
  disc.b = pc.theta * (st.b_t * pc.b_bar_c);
  disc.m = st.m_t * pc.m_bar_c;
  disc.q = st.q_t;
  Matrix r = Matrix::Zero(nx, nx);
  for (int i = 0; i < tab.stages; ++i) {
    const Matrix stage = pc.lambda_i[i] * st.r_t * pc.lambda_i[i].transpose();
    r += tab.b(i) * stage;
  }
  disc.r_ww = symmetrize(r);
  attach_stage_terms(disc, model);
  return disc;
}

}  // namespace lqdisc
