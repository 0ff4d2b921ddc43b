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

#include <string>
#include <vector>

#include "lqdisc/types.hpp"

namespace lqdisc {

/**
 * @brief Continuous-time (stochastic) LQ problem in stacked output form.
 *
 *   dx = (A_c x + B_c u) dt + G_c dw,   z = C_c x + D_c u,
 *   stage cost 1/2 (z - zbar)' Q_c (z - zbar),
 *
 * with u and zbar held constant over each sample interval of length t_s.
 */
struct ContinuousLqModel {
  Matrix a_c;
  Matrix b_c;
  Matrix g_c;
  Matrix c_c;
  Matrix d_c;
  Matrix q_c;
  double t_s = 0.0;
  Vector x0_mean;
  Matrix x0_cov;
  VectorSeq inputs;
  VectorSeq targets;

  Eigen::Index nx() const { return a_c.rows(); }
  Eigen::Index nu() const { return b_c.cols(); }
  Eigen::Index nw() const { return g_c.cols(); }
  Eigen::Index nz() const { return c_c.rows(); }
  Eigen::Index nxu() const { return nx() + nu(); }
  std::size_t horizon() const { return inputs.size(); }

  /// [C_c D_c], maps [x; u] to z.
  Matrix output_map() const;
  /// C_c' Q_c C_c, the weight seen by state noise.
  Matrix noise_weight() const;
};

/// Output-tracking plus input-regularization weights (unstacked form).
struct TrackingSpec {
  Matrix c_plant;
  Matrix d_plant;
  Matrix q_zz;
  Matrix q_uu;
  VectorSeq output_targets;
  VectorSeq input_targets;
};

struct PlantMatrices {
  Matrix a_c;
  Matrix b_c;
  Matrix g_c;
};

struct HorizonData {
  std::size_t steps = 1;
  Vector x0_mean;
  Matrix x0_cov;
  VectorSeq inputs;
};

/**
 * Stack a tracking problem into a single output z = [y; u] with
 * Q_c = blkdiag(q_zz, q_uu) and targets [zbar_k; ubar_k].
 *
 * Sequences of length one are broadcast over the horizon.
 */
ContinuousLqModel build_stacked_model(const TrackingSpec& spec, const PlantMatrices& plant,
                                      double t_s, const HorizonData& horizon);

/// Broadcast a length-one sequence to `steps` entries; other lengths pass through.
VectorSeq broadcast(const VectorSeq& seq, std::size_t steps);

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string joined() const;
};

ValidationReport validate(const ContinuousLqModel& model);

/// Throws ValidationError carrying every violation.
void require_valid(const ContinuousLqModel& model);

/// l_c(z - zbar) = 1/2 (z - zbar)' Q_c (z - zbar) with z = C_c x + D_c u.
double continuous_stage_cost(const ContinuousLqModel& model, const Vector& x, const Vector& u,
                             const Vector& zbar);

/// Discrete-time equivalent with stage cost 1/2 xi'Q xi + q_k' xi + rho_k, xi = [x; u].
struct DiscreteLqModel {
  Matrix a;
  Matrix b;
  Matrix c;
  Matrix d;
  Matrix q;
  Matrix m;
  Matrix r_ww;
  double t_s = 0.0;
  VectorSeq q_k_seq;
  std::vector<double> rho_k_seq;

  Eigen::Index nx() const { return a.rows(); }
  Eigen::Index nu() const { return b.cols(); }
  std::size_t horizon() const { return q_k_seq.size(); }

  double stage_cost(std::size_t k, const Vector& x, const Vector& u) const;
};

/// Fill q_k = M zbar_k and rho_k = l_c(zbar_k) t_s, and copy C, D, t_s.
void attach_stage_terms(DiscreteLqModel& disc, const ContinuousLqModel& model);

ValidationReport validate(const DiscreteLqModel& disc);

}  // namespace lqdisc
