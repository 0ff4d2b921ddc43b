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
#include "lqdisc/disc_expm.hpp"

#include "lqdisc/densela.hpp"
#include "lqdisc/errors.hpp"

namespace lqdisc {
namespace {

struct Partition {
  Matrix p11, p12, p22;
};

// exp([[top_left, top_right], [0, bottom_right]] t)
Partition block_expm(const Matrix& top_left, const Matrix& top_right, const Matrix& bottom_right,
                     double t) {
  const Eigen::Index n1 = top_left.rows();
  const Eigen::Index n2 = bottom_right.rows();
  Matrix big = Matrix::Zero(n1 + n2, n1 + n2);
  big.topLeftCorner(n1, n1) = top_left;
  big.topRightCorner(n1, n2) = top_right;
  big.bottomRightCorner(n2, n2) = bottom_right;
  Matrix e;
  try {
    e = expm(big * t);
  } catch (const DivergenceError&) {
    throw DivergenceError("matrix exponential overflowed; model norms too large", 0);
  }
  return {e.topLeftCorner(n1, n1), e.topRightCorner(n1, n2), e.bottomRightCorner(n2, n2)};
}

}  // namespace

ExpmBlocks expm_blocks(const ContinuousLqModel& model) {
  const Eigen::Index nx = model.nx();
  const Eigen::Index nu = model.nu();
  const Eigen::Index nxu = nx + nu;
  const double t = model.t_s;

  ExpmBlocks blk;
  blk.h_ext = Matrix::Zero(nxu, nxu);
  blk.h_ext.topLeftCorner(nx, nx) = model.a_c;
  blk.h_ext.topRightCorner(nx, nu) = model.b_c;
  blk.h_out = model.output_map();
  blk.m_bar_c = -blk.h_out.transpose() * model.q_c;
  blk.q_bar_c = symmetrize(-blk.m_bar_c * blk.h_out);
  blk.g_bar_c = model.g_c * model.g_c.transpose();

  auto p1 = block_expm(-blk.h_ext.transpose(), blk.q_bar_c, blk.h_ext, t);
  auto p2 = block_expm(Matrix::Zero(nxu, nxu), Matrix::Identity(nxu, nxu), blk.h_ext.transpose(), t);
  auto p3 = block_expm(-model.a_c, blk.g_bar_c, model.a_c.transpose(), t);
  blk.phi1_11 = std::move(p1.p11);
  blk.phi1_12 = std::move(p1.p12);
  blk.phi1_22 = std::move(p1.p22);
  blk.phi2_11 = std::move(p2.p11);
  blk.phi2_12 = std::move(p2.p12);
  blk.phi2_22 = std::move(p2.p22);
  blk.phi3_11 = std::move(p3.p11);
  blk.phi3_12 = std::move(p3.p12);
  blk.phi3_22 = std::move(p3.p22);
  return blk;
}

DiscreteLqModel discretize_expm(const ContinuousLqModel& model) {
  require_valid(model);
  const Eigen::Index nx = model.nx();
  const Eigen::Index nu = model.nu();

  // The blocks are formed on t_s / 2^k with norm(H) t_s / 2^k <= 1/2, where the
  // growing factor exp(-H' t) stays O(1), and carried to t_s by the semigroup:
  //   Gamma(2t) = Gamma(t)^2,          Q(2t) = Q(t) + Gamma(t)' Q(t) Gamma(t),
  //   S(2t) = S(t) + Gamma(t)' S(t),   R(2t) = R(t) + A(t) R(t) A(t)'.
  ContinuousLqModel sub = model;
  int halvings = 0;
  Matrix h_ext = Matrix::Zero(nx + nu, nx + nu);
  h_ext.topLeftCorner(nx, nx) = model.a_c;
  h_ext.topRightCorner(nx, nu) = model.b_c;
  const double drift = norm1(h_ext);
  while (drift * sub.t_s > 0.5 && halvings < 60) {
    sub.t_s *= 0.5;
    ++halvings;
  }
  const ExpmBlocks blk = expm_blocks(sub);

  Matrix gamma = blk.phi1_22;
  Matrix q = symmetrize(blk.phi1_22.transpose() * blk.phi1_12);
  Matrix s_int = blk.phi2_12;
  Matrix r = symmetrize(blk.phi3_22.transpose() * blk.phi3_12);
  for (int i = 0; i < halvings; ++i) {
    const Matrix a = gamma.topLeftCorner(nx, nx);
    q = symmetrize(q + gamma.transpose() * q * gamma);
    s_int = s_int + gamma.transpose() * s_int;
    r = symmetrize(r + a * r * a.transpose());
    gamma = (gamma * gamma).eval();
  }

  DiscreteLqModel disc;
  disc.a = gamma.topLeftCorner(nx, nx);
  disc.b = gamma.topRightCorner(nx, nu);
  disc.q = std::move(q);
  disc.m = s_int * blk.m_bar_c;
  disc.r_ww = std::move(r);
  if (!disc.a.allFinite() || !disc.b.allFinite() || !disc.q.allFinite() ||
      !disc.r_ww.allFinite() || !disc.m.allFinite()) {
    throw DivergenceError("matrix exponential method produced non-finite weights", 0);
  }
  attach_stage_terms(disc, model);
  return disc;
}

}  // namespace lqdisc
