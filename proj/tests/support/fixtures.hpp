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

#include <random>

#include <Eigen/LU>

#include "lqdisc/model.hpp"

namespace lqdisc::testing {

/// Stiff two-state plant with output tracking z = x1 + x2 -> 3 and input regularization.
inline ContinuousLqModel stiff_plant_model(std::size_t steps = 4) {
  TrackingSpec spec;
  spec.c_plant = Matrix{{1.0, 1.0}};
  spec.d_plant = Matrix{{0.0, 0.0}};
  spec.q_zz = Matrix{{1.0}};
  spec.q_uu = Matrix::Identity(2, 2);
  spec.output_targets = {Vector::Constant(1, 3.0)};
  spec.input_targets = {Vector::Zero(2)};
  PlantMatrices plant;
  plant.a_c = Matrix{{-49.0, 24.0}, {-64.0, 31.0}};
  plant.b_c = Matrix{{2.0, 0.5}, {1.0, 3.0}};
  plant.g_c = 0.1 * Matrix::Identity(2, 2);
  HorizonData h;
  h.steps = steps;
  h.x0_mean = Vector{{0.0, 1.0}};
  h.x0_cov = 0.1 * Matrix::Identity(2, 2);
  h.inputs = {Vector::Ones(2)};
  return build_stacked_model(spec, plant, 1.0, h);
}

/// dx = u dt, z = x, Q_c = 1, T_s = 1.
inline ContinuousLqModel scalar_integrator_model() {
  ContinuousLqModel m;
  m.a_c = Matrix::Zero(1, 1);
  m.b_c = Matrix::Ones(1, 1);
  m.g_c = Matrix::Zero(1, 0);
  m.c_c = Matrix::Ones(1, 1);
  m.d_c = Matrix::Zero(1, 1);
  m.q_c = Matrix::Ones(1, 1);
  m.t_s = 1.0;
  m.x0_mean = Vector::Zero(1);
  m.x0_cov = Matrix::Zero(1, 1);
  m.inputs = {Vector::Ones(1)};
  m.targets = {Vector::Zero(1)};
  return m;
}

/// dx = dw, z = x, no input, x0 = 0, one unit interval.
inline ContinuousLqModel pure_noise_model() {
  ContinuousLqModel m;
  m.a_c = Matrix::Zero(1, 1);
  m.b_c = Matrix::Zero(1, 0);
  m.g_c = Matrix::Ones(1, 1);
  m.c_c = Matrix::Ones(1, 1);
  m.d_c = Matrix::Zero(1, 0);
  m.q_c = Matrix::Ones(1, 1);
  m.t_s = 1.0;
  m.x0_mean = Vector::Zero(1);
  m.x0_cov = Matrix::Zero(1, 1);
  m.inputs = {Vector::Zero(0)};
  m.targets = {Vector::Zero(1)};
  return m;
}

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c) {
  std::normal_distribution<double> n01;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = n01(rng);
  return m;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n) {
  return random_matrix(rng, n, 1);
}

/// -(W W' + 0.5 I) + (K - K'): eigenvalues have real part <= -0.5.
inline Matrix random_stable(std::mt19937_64& rng, Eigen::Index n) {
  const Matrix w = random_matrix(rng, n, n);
  const Matrix k = random_matrix(rng, n, n);
  return -(0.5 * w * w.transpose() + 0.5 * Matrix::Identity(n, n)) + 0.5 * (k - k.transpose());
}

inline ContinuousLqModel random_model(std::mt19937_64& rng, Eigen::Index nx, Eigen::Index nu,
                                      Eigen::Index nw, Eigen::Index nz, std::size_t steps = 1,
                                      double t_s = 1.0) {
  ContinuousLqModel m;
  m.a_c = random_stable(rng, nx);
  m.b_c = random_matrix(rng, nx, nu);
  m.g_c = 0.3 * random_matrix(rng, nx, nw);
  m.c_c = random_matrix(rng, nz, nx);
  m.d_c = random_matrix(rng, nz, nu);
  const Matrix wq = random_matrix(rng, nz, nz);
  m.q_c = wq.transpose() * wq + 0.1 * Matrix::Identity(nz, nz);
  m.q_c = 0.5 * (m.q_c + m.q_c.transpose()).eval();
  m.t_s = t_s;
  m.x0_mean = random_vector(rng, nx);
  const Matrix wp = 0.3 * random_matrix(rng, nx, nx);
  m.x0_cov = wp * wp.transpose();
  m.x0_cov = 0.5 * (m.x0_cov + m.x0_cov.transpose()).eval();
  for (std::size_t k = 0; k < steps; ++k) {
    m.inputs.push_back(random_vector(rng, nu));
    m.targets.push_back(random_vector(rng, nz));
  }
  return m;
}

inline double max_rel_diff(const Matrix& a, const Matrix& b) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

struct QpSolution {
  VectorSeq u;
  double value = 0.0;
};

/**
 * Equality-constrained QP over z = [x_0, u_0, ..., x_{N-1}, u_{N-1}, x_N]
 * solved through its full KKT system.
 */
inline QpSolution dense_qp(const DiscreteLqModel& d, const Vector& x0) {
  const Eigen::Index nx = d.nx(), nu = d.nu(), nxu = nx + nu;
  const auto n = static_cast<Eigen::Index>(d.horizon());
  const Eigen::Index nz = n * nxu + nx;
  const Eigen::Index nc = (n + 1) * nx;
  Matrix h = Matrix::Zero(nz, nz);
  Vector g = Vector::Zero(nz);
  Matrix c = Matrix::Zero(nc, nz);
  Vector rhs = Vector::Zero(nc);
  double rho = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    h.block(k * nxu, k * nxu, nxu, nxu) = d.q;
    g.segment(k * nxu, nxu) = d.q_k_seq[k];
    rho += d.rho_k_seq[k];
  }
  c.block(0, 0, nx, nx).setIdentity();
  rhs.head(nx) = x0;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index row = (k + 1) * nx;
    c.block(row, k * nxu, nx, nx) = -d.a;
    c.block(row, k * nxu + nx, nx, nu) = -d.b;
    c.block(row, (k + 1) * nxu, nx, nx).setIdentity();
  }
  Matrix kkt = Matrix::Zero(nz + nc, nz + nc);
  kkt.topLeftCorner(nz, nz) = h;
  kkt.topRightCorner(nz, nc) = c.transpose();
  kkt.bottomLeftCorner(nc, nz) = c;
  Vector b(nz + nc);
  b << -g, rhs;
  const Vector sol = kkt.fullPivLu().solve(b);
  const Vector z = sol.head(nz);
  QpSolution out;
  for (Eigen::Index k = 0; k < n; ++k) out.u.push_back(z.segment(k * nxu + nx, nu));
  out.value = 0.5 * z.dot(h * z) + g.dot(z) + rho;
  return out;
}

}  // namespace lqdisc::testing
