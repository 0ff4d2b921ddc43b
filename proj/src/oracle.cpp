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
#include "lqdisc/oracle.hpp"

#include <string>

#include "lqdisc/butcher.hpp"
#include "lqdisc/densela.hpp"
#include "lqdisc/disc_ode.hpp"
#include "lqdisc/errors.hpp"

namespace lqdisc {

namespace {

void check_config(const OracleConfig& cfg) {
  const long g = cfg.grid_points;
  if (g < 256 || (g & (g - 1)) != 0) {
    throw Error(ErrorKind::kArgument,
                "grid_points must be a power of two >= 256, got " + std::to_string(g));
  }
}

}  // namespace

double oracle_cost(const ContinuousLqModel& model, const Vector& x0, const Vector& u0,
                   const Vector& zbar0, const OracleConfig& cfg) {
  check_config(cfg);
  const Eigen::Index nx = model.nx();
  const Eigen::Index nu = model.nu();
  if (x0.size() != nx || u0.size() != nu || zbar0.size() != model.nz()) {
    throw ValidationError("oracle_cost: x0, u0 or zbar0 has the wrong length");
  }
  const long g = cfg.grid_points;
  const double delta = model.t_s / static_cast<double>(g);

  Matrix drift = Matrix::Zero(nx + nu, nx + nu);
  drift.topLeftCorner(nx, nx) = model.a_c;
  drift.topRightCorner(nx, nu) = model.b_c;
  const Matrix sub = expm(Matrix(delta * drift));
  const Matrix h = model.output_map();

  Vector xi(nx + nu);
  xi << x0, u0;
  auto integrand = [&](const Vector& v) {
    const Vector zt = h * v - zbar0;
    return 0.5 * zt.dot(model.q_c * zt);
  };

  double sum = 0.5 * integrand(xi);
  for (long i = 1; i < g; ++i) {
    xi = sub * xi;
    sum += integrand(xi);
  }
  xi = sub * xi;
  sum += 0.5 * integrand(xi);
  return delta * sum;
}

DiscreteLqModel oracle_discretize(const ContinuousLqModel& model, const OracleConfig& cfg) {
  check_config(cfg);
  return discretize_ode(model, Scheme::kClassicRk4, cfg.grid_points);
}

}  // namespace lqdisc
