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
#include "lqdisc/model.hpp"

#include <cmath>
#include <sstream>

#include "lqdisc/densela.hpp"
#include "lqdisc/errors.hpp"

namespace lqdisc {
namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kPsdTol = 1e-10;

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void expect_shape(std::vector<std::string>& out, const char* name, const Matrix& m,
                  Eigen::Index rows, Eigen::Index cols) {
  if (m.rows() != rows || m.cols() != cols) {
    out.push_back(std::string(name) + " is " + shape(m) + ", expected " + std::to_string(rows) +
                  "x" + std::to_string(cols));
  }
}

void expect_finite(std::vector<std::string>& out, const char* name, const Matrix& m) {
  if (!m.allFinite()) out.push_back(std::string(name) + " has non-finite entries");
}

void expect_sym_psd(std::vector<std::string>& out, const char* name, const Matrix& m,
                    double sym_tol) {
  if (m.rows() != m.cols() || !m.allFinite()) return;
  const double asym = max_abs(m - m.transpose());
  if (asym > sym_tol * std::max(1.0, max_abs(m))) {
    std::ostringstream os;
    os << name << " is not symmetric (max |m - m'| = " << asym << ")";
    out.push_back(os.str());
  } else if (!is_psd(m, kPsdTol)) {
    out.push_back(std::string(name) + " is not positive semidefinite");
  }
}

}  // namespace

Matrix ContinuousLqModel::output_map() const {
  Matrix h(nz(), nxu());
  h << c_c, d_c;
  return h;
}

Matrix ContinuousLqModel::noise_weight() const { return c_c.transpose() * q_c * c_c; }

VectorSeq broadcast(const VectorSeq& seq, std::size_t steps) {
  if (seq.size() == 1 && steps > 1) return VectorSeq(steps, seq.front());
  return seq;
}

ContinuousLqModel build_stacked_model(const TrackingSpec& spec, const PlantMatrices& plant,
                                      double t_s, const HorizonData& horizon) {
  const Eigen::Index nx = plant.a_c.rows();
  const Eigen::Index nu = plant.b_c.cols();
  const Eigen::Index ny = spec.c_plant.rows();

  std::vector<std::string> errors;
  expect_shape(errors, "C", spec.c_plant, ny, nx);
  expect_shape(errors, "D", spec.d_plant, ny, nu);
  expect_shape(errors, "Q_zz", spec.q_zz, ny, ny);
  expect_shape(errors, "Q_uu", spec.q_uu, nu, nu);
  const auto zbar = broadcast(spec.output_targets, horizon.steps);
  const auto ubar = nu == 0 && spec.input_targets.empty()
                        ? VectorSeq(horizon.steps, Vector::Zero(0))
                        : broadcast(spec.input_targets, horizon.steps);
  if (zbar.size() != horizon.steps) errors.push_back("output target count != horizon");
  if (ubar.size() != horizon.steps) errors.push_back("input target count != horizon");
  for (std::size_t k = 0; k < zbar.size() && k < ubar.size(); ++k) {
    if (zbar[k].size() != ny || ubar[k].size() != nu) {
      errors.push_back("target dimension mismatch at step " + std::to_string(k));
      break;
    }
  }
  if (!errors.empty()) {
    ValidationReport report{errors};
    throw ValidationError("tracking spec: " + report.joined());
  }

  ContinuousLqModel model;
  model.a_c = plant.a_c;
  model.b_c = plant.b_c;
  model.g_c = plant.g_c;
  model.c_c = Matrix::Zero(ny + nu, nx);
  model.c_c.topRows(ny) = spec.c_plant;
  model.d_c = Matrix::Zero(ny + nu, nu);
  model.d_c.topRows(ny) = spec.d_plant;
  model.d_c.bottomRows(nu).setIdentity();
  model.q_c = Matrix::Zero(ny + nu, ny + nu);
  model.q_c.topLeftCorner(ny, ny) = spec.q_zz;
  model.q_c.bottomRightCorner(nu, nu) = spec.q_uu;
  model.t_s = t_s;
  model.x0_mean = horizon.x0_mean;
  model.x0_cov = horizon.x0_cov;
  model.inputs = broadcast(horizon.inputs, horizon.steps);
  model.targets.reserve(horizon.steps);
  for (std::size_t k = 0; k < horizon.steps; ++k) {
    Vector stacked(ny + nu);
    stacked << zbar[k], ubar[k];
    model.targets.push_back(std::move(stacked));
  }
  return model;
}

std::string ValidationReport::joined() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v;
  }
  return out;
}

ValidationReport validate(const ContinuousLqModel& model) {
  std::vector<std::string> out;
  const Eigen::Index nx = model.nx();
  const Eigen::Index nu = model.nu();
  const Eigen::Index nz = model.nz();

  expect_shape(out, "A_c", model.a_c, nx, nx);
  expect_shape(out, "B_c", model.b_c, nx, nu);
  expect_shape(out, "G_c", model.g_c, nx, model.nw());
  expect_shape(out, "C_c", model.c_c, nz, nx);
  expect_shape(out, "D_c", model.d_c, nz, nu);
  expect_shape(out, "Q_c", model.q_c, nz, nz);
  expect_shape(out, "x0_cov", model.x0_cov, nx, nx);
  if (model.x0_mean.size() != nx) {
    out.push_back("x0_mean has length " + std::to_string(model.x0_mean.size()) + ", expected " +
                  std::to_string(nx));
  }
  for (const auto& [name, m] : {std::pair{"A_c", &model.a_c}, std::pair{"B_c", &model.b_c},
                                std::pair{"G_c", &model.g_c}, std::pair{"C_c", &model.c_c},
                                std::pair{"D_c", &model.d_c}, std::pair{"Q_c", &model.q_c},
                                std::pair{"x0_cov", &model.x0_cov}}) {
    expect_finite(out, name, *m);
  }
  if (!model.x0_mean.allFinite()) out.push_back("x0_mean has non-finite entries");

  expect_sym_psd(out, "Q_c", model.q_c, kSymmetryTol);
  expect_sym_psd(out, "x0_cov", model.x0_cov, kSymmetryTol);

  if (!(model.t_s > 0.0) || !std::isfinite(model.t_s)) {
    out.push_back("T_s must be positive and finite");
  }
  const std::size_t n = model.horizon();
  if (n == 0) out.push_back("horizon N must be at least 1");
  if (model.targets.size() != n) {
    out.push_back("target count " + std::to_string(model.targets.size()) +
                  " does not match horizon " + std::to_string(n));
  }
  for (std::size_t k = 0; k < model.inputs.size(); ++k) {
    if (model.inputs[k].size() != nu || !model.inputs[k].allFinite()) {
      out.push_back("input u_" + std::to_string(k) + " has wrong length or non-finite entries");
      break;
    }
  }
  for (std::size_t k = 0; k < model.targets.size(); ++k) {
    if (model.targets[k].size() != nz || !model.targets[k].allFinite()) {
      out.push_back("target zbar_" + std::to_string(k) +
                    " has wrong length or non-finite entries");
      break;
    }
  }
  return ValidationReport{std::move(out)};
}

void require_valid(const ContinuousLqModel& model) {
  const auto report = validate(model);
  if (!report.ok()) throw ValidationError("invalid model: " + report.joined());
}

double continuous_stage_cost(const ContinuousLqModel& model, const Vector& x, const Vector& u,
                             const Vector& zbar) {
  const Vector e = model.c_c * x + model.d_c * u - zbar;
  return 0.5 * e.dot(model.q_c * e);
}

double DiscreteLqModel::stage_cost(std::size_t k, const Vector& x, const Vector& u) const {
  Vector xi(x.size() + u.size());
  xi << x, u;
  return 0.5 * xi.dot(q * xi) + q_k_seq.at(k).dot(xi) + rho_k_seq.at(k);
}

void attach_stage_terms(DiscreteLqModel& disc, const ContinuousLqModel& model) {
  disc.c = model.c_c;
  disc.d = model.d_c;
  disc.t_s = model.t_s;
  disc.q_k_seq.clear();
  disc.rho_k_seq.clear();
  for (const auto& zbar : model.targets) {
    disc.q_k_seq.push_back(disc.m * zbar);
    disc.rho_k_seq.push_back(0.5 * zbar.dot(model.q_c * zbar) * model.t_s);
  }
}

ValidationReport validate(const DiscreteLqModel& disc) {
  std::vector<std::string> out;
  const Eigen::Index nx = disc.nx();
  const Eigen::Index nxu = nx + disc.nu();
  expect_shape(out, "A", disc.a, nx, nx);
  expect_shape(out, "Q", disc.q, nxu, nxu);
  expect_shape(out, "M", disc.m, nxu, disc.c.rows());
  expect_shape(out, "R_ww", disc.r_ww, nx, nx);
  expect_sym_psd(out, "Q", disc.q, 1e-10);
  expect_sym_psd(out, "R_ww", disc.r_ww, 1e-10);
  if (disc.rho_k_seq.size() != disc.q_k_seq.size()) {
    out.push_back("rho_k and q_k sequences differ in length");
  }
  for (std::size_t k = 0; k < disc.q_k_seq.size(); ++k) {
    if (disc.q_k_seq[k].size() != nxu) {
      out.push_back("q_k[" + std::to_string(k) + "] has length " +
                    std::to_string(disc.q_k_seq[k].size()) + ", expected " + std::to_string(nxu));
    }
  }
  return ValidationReport{std::move(out)};
}

}  // namespace lqdisc
