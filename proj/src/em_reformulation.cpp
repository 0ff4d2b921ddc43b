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
#include "lqdisc/errors.hpp"
#include "lqdisc/stochastic.hpp"

namespace lqdisc {

namespace {

void require_sub_steps(long n_sub) {
  if (n_sub < 1) {
    throw Error(ErrorKind::kArgument, "n_sub must be >= 1, got " + std::to_string(n_sub));
  }
}

// Block j of sum_i dt G_i' X_i, with X_i given for i = 1..n.
Matrix noise_projection(const std::vector<Matrix>& ag, const std::vector<Matrix>& x, double dt,
                        Eigen::Index nw) {
  const long n = static_cast<long>(ag.size());
  const Eigen::Index p = x[1].cols();
  Matrix out = Matrix::Zero(n * nw, p);
  for (long j = 1; j <= n; ++j) {
    auto blk = out.middleRows((j - 1) * nw, nw);
    for (long i = j; i <= n; ++i) blk.noalias() += ag[i - j].transpose() * x[i];
    blk *= dt;
  }
  return out;
}

void check_pairing(const ContinuousLqModel& model, const DiscreteLqModel& disc) {
  if (disc.nx() != model.nx() || disc.nu() != model.nu() ||
      disc.horizon() != model.horizon() || disc.rho_k_seq.size() != model.horizon()) {
    throw ValidationError("discrete model does not match the continuous model dimensions");
  }
}

}  // namespace

EmKernel make_em_kernel(const ContinuousLqModel& model, long n_sub) {
  require_sub_steps(n_sub);
  const Eigen::Index nx = model.nx();
  const Eigen::Index nw = model.nw();
  const long n = n_sub;

  EmKernel ker;
  ker.n_sub = n;
  ker.dt = model.t_s / static_cast<double>(n);
  const double dt = ker.dt;
  const Matrix step = Matrix::Identity(nx, nx) + dt * model.a_c;

  ker.a_pow.resize(n + 1);
  ker.b_sum.resize(n + 1);
  ker.a_pow[0] = Matrix::Identity(nx, nx);
  ker.b_sum[0] = Matrix::Zero(nx, model.nu());
  for (long i = 1; i <= n; ++i) {
    ker.a_pow[i] = step * ker.a_pow[i - 1];
    ker.b_sum[i] = step * ker.b_sum[i - 1] + dt * model.b_c;
  }

  std::vector<Matrix> ag(n);
  for (long d = 0; d < n; ++d) ag[d] = ker.a_pow[d] * model.g_c;

  const Eigen::Index m = n * nw;
  ker.g_end.resize(nx, m);
  for (long j = 1; j <= n; ++j) ker.g_end.middleCols((j - 1) * nw, nw) = ag[n - j];

  const Matrix q_ww = model.noise_weight();
  const Matrix cq = model.c_c.transpose() * model.q_c;

  std::vector<Matrix> xs(n + 1);
  for (long i = 1; i <= n; ++i) xs[i] = q_ww * ker.a_pow[i];
  ker.l_wx = noise_projection(ag, xs, dt, nw);
  for (long i = 1; i <= n; ++i) xs[i] = cq * (model.c_c * ker.b_sum[i] + model.d_c);
  ker.l_wu = noise_projection(ag, xs, dt, nw);
  for (long i = 1; i <= n; ++i) xs[i] = cq;
  ker.l_wz = noise_projection(ag, xs, dt, nw);

  // Block (j, l), j <= l, d = l - j: dt sum_{i'=0}^{n-l} ag[i'+d]' Q_ww ag[i'].
  ker.k_w = Matrix::Zero(m, m);
  std::vector<Matrix> qag(n);
  for (long d = 0; d < n; ++d) qag[d] = q_ww * ag[d];
  for (long d = 0; d < n; ++d) {
    Matrix acc = Matrix::Zero(nw, nw);
    std::vector<Matrix> prefix(n - d);
    for (long mi = 0; mi + d < n; ++mi) {
      acc.noalias() += ag[mi + d].transpose() * qag[mi];
      prefix[mi] = acc;
    }
    for (long j = 1; j + d <= n; ++j) {
      const long l = j + d;
      const Matrix blk = dt * prefix[n - l];
      ker.k_w.block((j - 1) * nw, (l - 1) * nw, nw, nw) = blk;
      if (d > 0) ker.k_w.block((l - 1) * nw, (j - 1) * nw, nw, nw) = blk.transpose();
    }
  }
  ker.k_w = symmetrize(ker.k_w);
  return ker;
}

Eigen::Index em_dimension(const ContinuousLqModel& model, long n_sub) {
  return model.nx() + static_cast<Eigen::Index>(model.horizon()) * n_sub * model.nw();
}

Matrix EmReformulation::p_bar() const {
  const Eigen::Index d = dim();
  Matrix out = Matrix::Zero(d, d);
  out.topLeftCorner(nx, nx) = p0;
  out.bottomRightCorner(d - nx, d - nx).diagonal().setConstant(dt);
  return out;
}

EmReformulation em_reformulate(const ContinuousLqModel& model, const DiscreteLqModel& disc,
                               long n_sub, Eigen::Index cap) {
  require_sub_steps(n_sub);
  require_valid(model);
  check_pairing(model, disc);
  const Eigen::Index dim = em_dimension(model, n_sub);
  if (dim > cap) {
    throw ResourceError("EM reformulation dimension " + std::to_string(dim) +
                            " exceeds cap " + std::to_string(cap),
                        static_cast<long>(dim));
  }

  const EmKernel ker = make_em_kernel(model, n_sub);
  const Eigen::Index nx = model.nx();
  const Eigen::Index nu = model.nu();
  const Eigen::Index m = n_sub * model.nw();
  const std::size_t horizon = model.horizon();

  const Matrix q_xx = disc.q.topLeftCorner(nx, nx);
  const Matrix q_xu = disc.q.topRightCorner(nx, nu);
  const Matrix q_uu = disc.q.bottomRightCorner(nu, nu);

  EmReformulation ref;
  ref.n_sub = n_sub;
  ref.dt = ker.dt;
  ref.horizon = horizon;
  ref.nx = nx;
  ref.nw = model.nw();
  ref.q_big = Matrix::Zero(dim, dim);
  ref.q_vec = Vector::Zero(dim);
  ref.m_bar = Vector::Zero(dim);
  ref.m_bar.head(nx) = model.x0_mean;
  ref.p0 = model.x0_cov;

  // x_k = S y + zeta, with S nonzero only in its first `cols` columns.
  Matrix s = Matrix::Zero(nx, dim);
  s.leftCols(nx).setIdentity();
  Vector zeta = Vector::Zero(nx);

  for (std::size_t k = 0; k < horizon; ++k) {
    const Vector& u = model.inputs[k];
    const Vector& qk = disc.q_k_seq[k];
    const Eigen::Index off = nx + static_cast<Eigen::Index>(k) * m;
    const Eigen::Index cols = off;
    const auto sa = s.leftCols(cols);

    const Vector lin_x = q_xu * u + qk.head(nx);
    const Vector l_w = ker.l_wu * u - ker.l_wz * model.targets[k];

    ref.q_big.topLeftCorner(cols, cols).noalias() += sa.transpose() * q_xx * sa;
    ref.q_big.block(off, off, m, m) += ker.k_w;
    const Matrix cross = ker.l_wx * sa;
    ref.q_big.block(off, 0, m, cols) += cross;
    ref.q_big.block(0, off, cols, m) += cross.transpose();

    ref.q_vec.head(cols).noalias() += sa.transpose() * (q_xx * zeta + lin_x);
    ref.q_vec.segment(off, m).noalias() += ker.l_wx * zeta + l_w;

    ref.rho += 0.5 * zeta.dot(q_xx * zeta) + zeta.dot(lin_x) + 0.5 * u.dot(q_uu * u) +
               qk.tail(nu).dot(u) + disc.rho_k_seq[k];

    s.leftCols(cols) = disc.a * sa;
    s.block(0, off, nx, m) = ker.g_end;
    zeta = disc.a * zeta + disc.b * u;
  }
  ref.q_big = symmetrize(ref.q_big);
  return ref;
}

}  // namespace lqdisc
