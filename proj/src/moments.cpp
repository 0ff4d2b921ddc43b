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
#include <string>

#include "lqdisc/densela.hpp"
#include "lqdisc/disc_ode.hpp"
#include "lqdisc/errors.hpp"
#include "lqdisc/stochastic.hpp"

namespace lqdisc {

namespace {

// P_bar * v for P_bar = blkdiag(P0, dt I).
Vector apply_p_bar(const EmReformulation& ref, const Vector& v) {
  Vector out(v.size());
  out.head(ref.nx) = ref.p0 * v.head(ref.nx);
  out.tail(v.size() - ref.nx) = ref.dt * v.tail(v.size() - ref.nx);
  return out;
}

}  // namespace

CostMoments cost_moments(const EmReformulation& ref) {
  const Eigen::Index d = ref.dim();
  const Eigen::Index nx = ref.nx;

  Matrix qp(d, d);
  qp.leftCols(nx).noalias() = ref.q_big.leftCols(nx) * ref.p0;
  qp.rightCols(d - nx) = ref.dt * ref.q_big.rightCols(d - nx);

  const Vector qm = ref.q_big * ref.m_bar;
  const Vector g = qm + ref.q_vec;

  CostMoments out;
  out.mean = 0.5 * ref.m_bar.dot(qm) + ref.q_vec.dot(ref.m_bar) + ref.rho + 0.5 * qp.trace();
  out.variance = g.dot(apply_p_bar(ref, g)) + 0.5 * qp.cwiseProduct(qp.transpose()).sum();
  return out;
}

CostMoments streaming_moments(const ContinuousLqModel& model, const DiscreteLqModel& disc,
                              long n_sub) {
  require_valid(model);
  if (disc.nx() != model.nx() || disc.nu() != model.nu() ||
      disc.horizon() != model.horizon()) {
    throw ValidationError("discrete model does not match the continuous model dimensions");
  }
  const EmKernel ker = make_em_kernel(model, n_sub);
  const Eigen::Index nx = model.nx();
  const Eigen::Index nu = model.nu();
  const double dt = ker.dt;
  const Matrix& f_mat = disc.a;
  const Matrix& g = ker.g_end;

  const Matrix q_xx = disc.q.topLeftCorner(nx, nx);
  const Matrix q_xu = disc.q.topRightCorner(nx, nu);
  const Matrix q_uu = disc.q.bottomRightCorner(nu, nu);

  // Mean-to-go 1/2 x'Px + p'x + r and variance-to-go 1/2 x'Sx + sig'x + v.
  Matrix p_mat = Matrix::Zero(nx, nx);
  Vector p_vec = Vector::Zero(nx);
  double r = 0.0;
  Matrix s_mat = Matrix::Zero(nx, nx);
  Vector sig = Vector::Zero(nx);
  double v = 0.0;

  for (std::size_t kk = model.horizon(); kk-- > 0;) {
    const Vector& u = model.inputs[kk];
    const Vector& qk = disc.q_k_seq[kk];
    const Vector f = disc.b * u;
    const Vector l_w = ker.l_wu * u - ker.l_wz * model.targets[kk];

    const Vector pf = p_mat * f;
    const Matrix gp = g.transpose() * p_mat;
    const Matrix k = ker.k_w + gp * g;
    const Matrix l = ker.l_wx + gp * f_mat;
    const Vector ell = l_w + g.transpose() * (pf + p_vec);

    const Vector sf = s_mat * f;
    const Matrix s_next = symmetrize(f_mat.transpose() * s_mat * f_mat +
                                     2.0 * dt * l.transpose() * l);
    const Vector sig_next = f_mat.transpose() * (sf + sig) + 2.0 * dt * l.transpose() * ell;
    const double v_next = 0.5 * f.dot(sf) + sig.dot(f) + v +
                          0.5 * dt * (g.transpose() * s_mat * g).trace() +
                          dt * ell.squaredNorm() + 0.5 * dt * dt * k.squaredNorm();

    const Matrix p_next = symmetrize(q_xx + f_mat.transpose() * p_mat * f_mat);
    const Vector pv_next = q_xu * u + qk.head(nx) + f_mat.transpose() * (pf + p_vec);
    const double r_next = 0.5 * u.dot(q_uu * u) + qk.tail(nu).dot(u) + disc.rho_k_seq[kk] +
                          0.5 * f.dot(pf) + p_vec.dot(f) + r + 0.5 * dt * k.trace();

    p_mat = p_next;
    p_vec = pv_next;
    r = r_next;
    s_mat = s_next;
    sig = sig_next;
    v = v_next;
  }

  const Vector& xh = model.x0_mean;
  const Matrix& p0 = model.x0_cov;
  const Vector grad = p_mat * xh + p_vec;
  const Matrix pp = p_mat * p0;

  CostMoments out;
  out.mean = 0.5 * xh.dot(p_mat * xh) + p_vec.dot(xh) + r + 0.5 * pp.trace();
  out.variance = 0.5 * xh.dot(s_mat * xh) + sig.dot(xh) + v + 0.5 * (s_mat * p0).trace() +
                 grad.dot(p0 * grad) + 0.5 * pp.cwiseProduct(pp.transpose()).sum();
  return out;
}

std::vector<Matrix> propagate_covariance(const DiscreteLqModel& disc, const Matrix& p0,
                                         std::size_t n) {
  std::vector<Matrix> out;
  out.reserve(n + 1);
  out.push_back(p0);
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(symmetrize(disc.a * out.back() * disc.a.transpose() + disc.r_ww));
  }
  return out;
}

double noise_trace_em(const ContinuousLqModel& model, long n_sub) {
  if (n_sub < 1) {
    throw Error(ErrorKind::kArgument, "n_sub must be >= 1, got " + std::to_string(n_sub));
  }
  const Eigen::Index nx = model.nx();
  const double dt = model.t_s / static_cast<double>(n_sub);
  const Matrix step = Matrix::Identity(nx, nx) + dt * model.a_c;
  const Matrix gg = dt * model.g_c * model.g_c.transpose();
  const Matrix q_ww = model.noise_weight();

  Matrix cov = Matrix::Zero(nx, nx);
  double s = 0.0;
  for (long i = 1; i <= n_sub; ++i) {
    cov = symmetrize(step * cov * step.transpose() + gg);
    s += dt * q_ww.cwiseProduct(cov).sum();
  }
  return s;
}

double noise_trace_ode(const ContinuousLqModel& model, Scheme scheme, long n_steps) {
  double s = 0.0;
  discretize_ode(model, scheme, n_steps, s);
  return s;
}

double expected_cost(const ContinuousLqModel& model, const DiscreteLqModel& disc,
                     const Matrix& p0, double noise_trace) {
  const std::size_t n = disc.horizon();
  if (model.inputs.size() != n || disc.nx() != model.nx()) {
    throw ValidationError("discrete model does not match the continuous model dimensions");
  }
  const Eigen::Index nx = disc.nx();
  const std::vector<Matrix> covs = propagate_covariance(disc, p0, n);
  const Matrix q_xx = disc.q.topLeftCorner(nx, nx);

  double psi = 0.0;
  Vector x = model.x0_mean;
  for (std::size_t k = 0; k < n; ++k) {
    const Vector& u = model.inputs[k];
    psi += disc.stage_cost(k, x, u) + 0.5 * (q_xx.cwiseProduct(covs[k]).sum() + noise_trace);
    x = disc.a * x + disc.b * u;
  }
  return psi;
}

double expected_cost(const ContinuousLqModel& model, const DiscreteLqModel& disc,
                     const Matrix& p0) {
  return expected_cost(model, disc, p0, noise_trace_ode(model, Scheme::kClassicRk4, 256));
}

}  // namespace lqdisc
