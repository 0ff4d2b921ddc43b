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
#include "lqdisc/butcher.hpp"

#include <cmath>
#include <optional>

#include "lqdisc/densela.hpp"
#include "lqdisc/errors.hpp"

namespace lqdisc {
namespace {

ButcherTableau make(TableauKind kind, int order, std::initializer_list<double> a,
                    std::initializer_list<double> b) {
  ButcherTableau t;
  t.stages = static_cast<int>(b.size());
  t.kind = kind;
  t.order = order;
  t.a = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      a.begin(), t.stages, t.stages);
  t.b = Eigen::Map<const Vector>(b.begin(), t.stages);
  t.c = t.a.rowwise().sum();
  return t;
}

// L-stable SDIRK root of the third-order condition.
constexpr double kGamma = 0.43586652150845899942;

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::kExplicitEuler: return "explicit_euler";
    case Scheme::kImplicitEuler: return "implicit_euler";
    case Scheme::kExplicitTrapezoidal: return "explicit_trapezoidal";
    case Scheme::kImplicitTrapezoidal: return "implicit_trapezoidal";
    case Scheme::kEsdirk34: return "esdirk34";
    case Scheme::kClassicRk4: return "classic_rk4";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : kAllSchemes) {
    if (to_string(s) == name) return s;
  }
  throw Error(ErrorKind::kArgument, "unknown scheme '" + std::string(name) + "'");
}

ButcherTableau tableau(Scheme scheme) {
  using K = TableauKind;
  switch (scheme) {
    case Scheme::kExplicitEuler:
      return make(K::kExplicit, 1, {0.0}, {1.0});
    case Scheme::kImplicitEuler:
      return make(K::kDiagonallyImplicit, 1, {1.0}, {1.0});
    case Scheme::kExplicitTrapezoidal:
      return make(K::kExplicit, 2, {0.0, 0.0, 1.0, 0.0}, {0.5, 0.5});
    case Scheme::kImplicitTrapezoidal:
      return make(K::kDiagonallyImplicit, 2, {0.0, 0.0, 0.5, 0.5}, {0.5, 0.5});
    case Scheme::kEsdirk34: {
      // Stiffly accurate: b is the last row of a.
      const double a31 = 0.14073777472470619619;
      const double a32 = -0.1083655513813208000;
      const double a41 = 0.10239940061991099768;
      const double a42 = -0.3768784522555561061;
      const double a43 = 0.83861253012718610911;
      return make(K::kDiagonallyImplicit, 3,
                  {0.0, 0.0, 0.0, 0.0,             //
                   kGamma, kGamma, 0.0, 0.0,       //
                   a31, a32, kGamma, 0.0,          //
                   a41, a42, a43, kGamma},
                  {a41, a42, a43, kGamma});
    }
    case Scheme::kClassicRk4:
      return make(K::kExplicit, 4,
                  {0.0, 0.0, 0.0, 0.0,  //
                   0.5, 0.0, 0.0, 0.0,  //
                   0.0, 0.5, 0.0, 0.0,  //
                   0.0, 0.0, 1.0, 0.0},
                  {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0});
  }
  throw Error(ErrorKind::kArgument, "unknown scheme");
}

PrecomputedCoefficients precompute(const ContinuousLqModel& model, const ButcherTableau& tab,
                                   long n_steps) {
  if (n_steps < 1) {
    throw Error(ErrorKind::kArgument, "step count must be at least 1, got " +
                                          std::to_string(n_steps));
  }
  const Eigen::Index nx = model.nx();
  const Eigen::Index nu = model.nu();
  const Eigen::Index nxu = nx + nu;
  const int s = tab.stages;
  const Matrix ident = Matrix::Identity(nx, nx);
  const Matrix& a_c = model.a_c;

  PrecomputedCoefficients pc;
  pc.h = model.t_s / static_cast<double>(n_steps);
  pc.weights = tab.b;
  const double h = pc.h;

  // One factorization per distinct diagonal coefficient.
  std::vector<std::pair<double, LuFactor<double>>> factors;
  auto factor_for = [&](double diag, int stage) -> const LuFactor<double>& {
    for (const auto& [d, f] : factors) {
      if (d == diag) return f;
    }
    try {
      factors.emplace_back(diag, LuFactor<double>(ident - h * diag * a_c));
    } catch (const SingularMatrixError& e) {
      throw DivergenceError("implicit stage " + std::to_string(stage + 1) +
                                ": (I - h a_ii A_c) is singular; reduce the step size (" +
                                e.what() + ")",
                            stage + 1);
    }
    return factors.back().second;
  };

  pc.lambda_i.reserve(s);
  pc.theta_i.reserve(s);
  for (int i = 0; i < s; ++i) {
    Matrix acc = Matrix::Zero(nx, nx);
    for (int j = 0; j < i; ++j) {
      if (tab.a(i, j) != 0.0) acc += tab.a(i, j) * pc.lambda_i[j];
    }
    Matrix rhs = ident + h * a_c * acc;
    const double diag = tab.a(i, i);
    Matrix lam = diag == 0.0 ? std::move(rhs) : factor_for(diag, i).solve(rhs);
    pc.lambda_i.push_back(std::move(lam));

    Matrix theta = Matrix::Zero(nx, nx);
    for (int j = 0; j <= i; ++j) {
      if (tab.a(i, j) != 0.0) theta += tab.a(i, j) * pc.lambda_i[j];
    }
    pc.theta_i.push_back(std::move(theta));
  }

  pc.lambda = ident;
  pc.theta = Matrix::Zero(nx, nx);
  for (int i = 0; i < s; ++i) {
    pc.lambda += h * tab.b(i) * (a_c * pc.lambda_i[i]);
    pc.theta += tab.b(i) * pc.lambda_i[i];
  }

  pc.b_bar_c = h * model.b_c;
  auto extended = [&](const Matrix& lam, const Matrix& theta) {
    Matrix om = Matrix::Zero(nxu, nxu);
    om.topLeftCorner(nx, nx) = lam;
    om.topRightCorner(nx, nu) = theta * pc.b_bar_c;
    om.bottomRightCorner(nu, nu).setIdentity();
    return om;
  };
  pc.omega_i.reserve(s);
  for (int i = 0; i < s; ++i) pc.omega_i.push_back(extended(pc.lambda_i[i], pc.theta_i[i]));
  pc.omega = extended(pc.lambda, pc.theta);

  const Matrix h_out = model.output_map();
  const Matrix hq = h_out.transpose() * model.q_c;
  pc.m_bar_c = Matrix::Zero(nxu, model.nz());
  pc.q_bar_c = Matrix::Zero(nxu, nxu);
  for (int i = 0; i < s; ++i) {
    const Matrix om_t_hq = pc.omega_i[i].transpose() * hq;
    pc.m_bar_c -= h * tab.b(i) * om_t_hq;
    pc.q_bar_c += h * tab.b(i) * (om_t_hq * (h_out * pc.omega_i[i]));
  }
  pc.q_bar_c = symmetrize(pc.q_bar_c);
  pc.r_bar_c = symmetrize(h * model.g_c * model.g_c.transpose());

  for (const Matrix& m : pc.lambda_i) {
    if (!m.allFinite()) throw DivergenceError("stage coefficients are not finite", 0);
  }
  return pc;
}

}  // namespace lqdisc
