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

#include "lqdisc/model.hpp"

namespace lqdisc {

/// Block matrices of the three exponentials and their partitions.
struct ExpmBlocks {
  /// Extended drift [[A_c, B_c], [0, 0]].
  Matrix h_ext;
  /// Output map [C_c D_c].
  Matrix h_out;
  Matrix m_bar_c;
  Matrix q_bar_c;
  Matrix g_bar_c;
  Matrix phi1_11, phi1_12, phi1_22;
  Matrix phi2_11, phi2_12, phi2_22;
  Matrix phi3_11, phi3_12, phi3_22;
};

/// Assemble and exponentiate the three block matrices at t = model.t_s.
ExpmBlocks expm_blocks(const ContinuousLqModel& model);

/// Discrete equivalent read off the block exponentials.
DiscreteLqModel discretize_expm(const ContinuousLqModel& model);

}  // namespace lqdisc
