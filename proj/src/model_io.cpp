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
#include "lqdisc/model_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "lqdisc/errors.hpp"

namespace lqdisc {

using nlohmann::json;

namespace {

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ValidationError(std::string("missing key \"") + key + "\"");
  return doc.at(key);
}

void reject_unknown(const json& doc, const std::set<std::string>& allowed, const char* where) {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ValidationError(std::string("unknown key \"") + it.key() + "\" in " + where);
    }
  }
}

double number(const json& j, const std::string& name) {
  if (!j.is_number()) throw ValidationError(name + " must be a number");
  return j.get<double>();
}

// A single vector [..] or a sequence [[..], ..].
VectorSeq sequence_from_json(const json& j, const std::string& name) {
  if (!j.is_array()) throw ValidationError(name + " must be an array");
  if (!j.empty() && j.front().is_array()) {
    VectorSeq out;
    for (std::size_t k = 0; k < j.size(); ++k) {
      out.push_back(vector_from_json(j[k], name + "[" + std::to_string(k) + "]"));
    }
    return out;
  }
  return {vector_from_json(j, name)};
}

std::size_t steps_of(const json& doc, const VectorSeq& inputs) {
  if (doc.contains("N")) {
    const json& n = doc.at("N");
    if (!n.is_number_integer() || n.get<long>() < 1) {
      throw ValidationError("N must be a positive integer");
    }
    return n.get<std::size_t>();
  }
  return std::max<std::size_t>(1, inputs.size());
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Matrix matrix_from_json(const json& j, const std::string& name) {
  if (!j.is_array()) throw ValidationError(name + " must be an array of arrays");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j.front().size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError(name + " row " + std::to_string(i) + " is not an array of length " +
                            std::to_string(cols));
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = number(row[c], name + "[" + std::to_string(i) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

Vector vector_from_json(const json& j, const std::string& name) {
  if (!j.is_array()) throw ValidationError(name + " must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = number(j[i], name + "[" + std::to_string(i) + "]");
  }
  return v;
}

ContinuousLqModel model_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("model document must be a JSON object");
  reject_unknown(doc,
                 {"A_c", "B_c", "G_c", "C_c", "D_c", "Q_c", "zbar", "tracking", "T_s", "N", "u",
                  "x0_mean", "x0_cov"},
                 "model");

  PlantMatrices plant;
  plant.a_c = matrix_from_json(require(doc, "A_c"), "A_c");
  const Eigen::Index nx = plant.a_c.rows();
  plant.b_c = matrix_from_json(require(doc, "B_c"), "B_c");
  plant.g_c = doc.contains("G_c") ? matrix_from_json(doc.at("G_c"), "G_c") : Matrix(nx, 0);
  if (plant.b_c.rows() == 0) plant.b_c.resize(nx, 0);
  const double t_s = number(require(doc, "T_s"), "T_s");

  HorizonData horizon;
  horizon.inputs = doc.contains("u") ? sequence_from_json(doc.at("u"), "u")
                                     : VectorSeq{Vector::Zero(plant.b_c.cols())};
  horizon.steps = steps_of(doc, horizon.inputs);
  horizon.x0_mean = doc.contains("x0_mean") ? vector_from_json(doc.at("x0_mean"), "x0_mean")
                                            : Vector::Zero(nx);
  horizon.x0_cov = doc.contains("x0_cov") ? matrix_from_json(doc.at("x0_cov"), "x0_cov")
                                          : Matrix::Zero(nx, nx);

  const bool stacked = doc.contains("C_c") || doc.contains("D_c") || doc.contains("Q_c") ||
                       doc.contains("zbar");
  if (stacked == doc.contains("tracking")) {
    throw ValidationError("model needs exactly one of the stacked keys or \"tracking\"");
  }

  if (!stacked) {
    const json& tr = doc.at("tracking");
    if (!tr.is_object()) throw ValidationError("tracking must be an object");
    reject_unknown(tr, {"C", "D", "Q_zz", "Q_uu", "zbar", "ubar"}, "tracking");
    TrackingSpec spec;
    spec.c_plant = matrix_from_json(require(tr, "C"), "tracking.C");
    const Eigen::Index ny = spec.c_plant.rows();
    const Eigen::Index nu = plant.b_c.cols();
    spec.d_plant = tr.contains("D") ? matrix_from_json(tr.at("D"), "tracking.D")
                                    : Matrix::Zero(ny, nu);
    spec.q_zz = matrix_from_json(require(tr, "Q_zz"), "tracking.Q_zz");
    spec.q_uu = matrix_from_json(require(tr, "Q_uu"), "tracking.Q_uu");
    if (spec.q_uu.rows() == 0) spec.q_uu.resize(nu, nu);
    spec.output_targets = sequence_from_json(require(tr, "zbar"), "tracking.zbar");
    spec.input_targets = tr.contains("ubar")
                             ? sequence_from_json(tr.at("ubar"), "tracking.ubar")
                             : VectorSeq{Vector::Zero(nu)};
    return build_stacked_model(spec, plant, t_s, horizon);
  }

  ContinuousLqModel model;
  model.a_c = plant.a_c;
  model.b_c = plant.b_c;
  model.g_c = plant.g_c;
  model.c_c = matrix_from_json(require(doc, "C_c"), "C_c");
  model.d_c = matrix_from_json(require(doc, "D_c"), "D_c");
  if (model.d_c.cols() == 0) model.d_c.resize(model.c_c.rows(), 0);
  model.q_c = matrix_from_json(require(doc, "Q_c"), "Q_c");
  model.t_s = t_s;
  model.x0_mean = horizon.x0_mean;
  model.x0_cov = horizon.x0_cov;
  model.inputs = broadcast(horizon.inputs, horizon.steps);
  model.targets = broadcast(sequence_from_json(require(doc, "zbar"), "zbar"), horizon.steps);
  return model;
}

ContinuousLqModel model_from_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model is not valid JSON: ") + e.what());
  }
  ContinuousLqModel model = model_from_json(doc);
  require_valid(model);
  return model;
}

ContinuousLqModel load_model(const std::string& path) {
  return model_from_text(read_text_file(path));
}

json to_json(const DiscreteLqModel& disc) {
  json out;
  out["A"] = matrix_to_json(disc.a);
  out["B"] = matrix_to_json(disc.b);
  out["C"] = matrix_to_json(disc.c);
  out["D"] = matrix_to_json(disc.d);
  out["Q"] = matrix_to_json(disc.q);
  out["M"] = matrix_to_json(disc.m);
  out["R_ww"] = matrix_to_json(disc.r_ww);
  out["T_s"] = disc.t_s;
  json qk = json::array();
  for (const Vector& v : disc.q_k_seq) qk.push_back(vector_to_json(v));
  out["q_k"] = std::move(qk);
  out["rho_k"] = disc.rho_k_seq;
  return out;
}

DiscreteLqModel discrete_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("discrete model must be a JSON object");
  reject_unknown(doc, {"A", "B", "C", "D", "Q", "M", "R_ww", "T_s", "q_k", "rho_k"},
                 "discrete model");
  DiscreteLqModel disc;
  disc.a = matrix_from_json(require(doc, "A"), "A");
  disc.b = matrix_from_json(require(doc, "B"), "B");
  if (disc.b.rows() == 0) disc.b.resize(disc.a.rows(), 0);
  disc.c = matrix_from_json(require(doc, "C"), "C");
  disc.d = matrix_from_json(require(doc, "D"), "D");
  disc.q = matrix_from_json(require(doc, "Q"), "Q");
  disc.m = matrix_from_json(require(doc, "M"), "M");
  disc.r_ww = matrix_from_json(require(doc, "R_ww"), "R_ww");
  disc.t_s = number(require(doc, "T_s"), "T_s");
  const json& qk = require(doc, "q_k");
  if (!qk.is_array()) throw ValidationError("q_k must be an array of arrays");
  for (std::size_t k = 0; k < qk.size(); ++k) {
    disc.q_k_seq.push_back(vector_from_json(qk[k], "q_k[" + std::to_string(k) + "]"));
  }
  const json& rho = require(doc, "rho_k");
  if (!rho.is_array()) throw ValidationError("rho_k must be an array of numbers");
  for (std::size_t k = 0; k < rho.size(); ++k) {
    disc.rho_k_seq.push_back(number(rho[k], "rho_k[" + std::to_string(k) + "]"));
  }
  return disc;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kArgument, "cannot open file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kArgument, "cannot write file " + path);
  out << text;
  if (!out) throw Error(ErrorKind::kArgument, "failed writing file " + path);
}

}  // namespace lqdisc
