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
#include "lqdisc/lqsolve.hpp"

#include <string>

#include <Eigen/Cholesky>

#include "lqdisc/densela.hpp"
#include "lqdisc/errors.hpp"

namespace lqdisc {

LqSolution solve_finite_horizon(const DiscreteLqModel& disc, const Vector& x0) {
  const std::size_t n = disc.horizon();
  const Eigen::Index nx = disc.nx();
  const Eigen::Index nu = disc.nu();
  if (n < 1) throw ValidationError("horizon must be >= 1");
  if (x0.size() != nx) {
    throw ValidationError("x0 has length " + std::to_string(x0.size()) + ", expected " +
                          std::to_string(nx));
  }
  const ValidationReport report = validate(disc);
  if (!report.ok()) throw ValidationError(report.joined());

  const Matrix q_xx = disc.q.topLeftCorner(nx, nx);
  const Matrix q_ux = disc.q.bottomLeftCorner(nu, nx);
  const Matrix q_uu = disc.q.bottomRightCorner(nu, nu);
  const Matrix& a = disc.a;
  const Matrix& b = disc.b;

  LqSolution sol;
  sol.gains.resize(n);
  sol.feedforward.resize(n);

  Matrix p_mat = Matrix::Zero(nx, nx);
  Vector p_vec = Vector::Zero(nx);
  double r = 0.0;
  for (std::size_t kk = n; kk-- > 0;) {
    const Vector& qk = disc.q_k_seq[kk];
    const Matrix pa = p_mat * a;
    const Matrix pb = p_mat * b;
    const Matrix h_xx = q_xx + a.transpose() * pa;
    const Matrix h_ux = q_ux + b.transpose() * pa;
    const Matrix h_uu = symmetrize(q_uu + b.transpose() * pb);
    const Vector h_x = qk.head(nx) + a.transpose() * p_vec;
    const Vector h_u = qk.tail(nu) + b.transpose() * p_vec;

    Eigen::LLT<Matrix> llt(h_uu);
    if (llt.info() != Eigen::Success) {
      throw ConvexityError("input Hessian at step " + std::to_string(kk) +
                           " is not positive definite");
    }
    sol.gains[kk] = -llt.solve(h_ux);
    sol.feedforward[kk] = -llt.solve(h_u);

    p_mat = symmetrize(h_xx + h_ux.transpose() * sol.gains[kk]);
    p_vec = h_x + h_ux.transpose() * sol.feedforward[kk];
    r += disc.rho_k_seq[kk] + 0.5 * h_u.dot(sol.feedforward[kk]);
  }
  sol.value = 0.5 * x0.dot(p_mat * x0) + p_vec.dot(x0) + r;

  sol.x_seq.reserve(n + 1);
  sol.u_seq.reserve(n);
  sol.x_seq.push_back(x0);
  for (std::size_t k = 0; k < n; ++k) {
    const Vector& x = sol.x_seq.back();
    sol.u_seq.push_back(sol.gains[k] * x + sol.feedforward[k]);
    sol.x_seq.push_back(a * x + b * sol.u_seq.back());
  }
  return sol;
}

}  // namespace lqdisc
