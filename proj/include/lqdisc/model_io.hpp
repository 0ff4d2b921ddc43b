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
#include <string_view>

#include <json.hpp>

#include "lqdisc/model.hpp"

namespace lqdisc {

/**
 * Parse a model document. Keys: A_c, B_c, G_c, T_s, N, u, x0_mean, x0_cov,
 * and either C_c, D_c, Q_c, zbar (stacked) or tracking {C, D, Q_zz, Q_uu,
 * zbar, ubar}. Unknown keys are rejected. Throws ValidationError.
 */
ContinuousLqModel model_from_json(const nlohmann::json& doc);
ContinuousLqModel model_from_text(std::string_view text);

/// Reads a file; a missing or unreadable file is an argument error.
ContinuousLqModel load_model(const std::string& path);

/// Matrices as row-major arrays of arrays, numbers as shortest round-trip decimals.
nlohmann::json to_json(const DiscreteLqModel& disc);
DiscreteLqModel discrete_from_json(const nlohmann::json& doc);

nlohmann::json matrix_to_json(const Matrix& m);
nlohmann::json vector_to_json(const Vector& v);
Matrix matrix_from_json(const nlohmann::json& j, const std::string& name);
Vector vector_from_json(const nlohmann::json& j, const std::string& name);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace lqdisc
