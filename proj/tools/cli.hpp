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

#include <iosfwd>
#include <string>
#include <vector>

#include "lqdisc/errors.hpp"
#include "lqdisc/model.hpp"

namespace lqdisc::cli {

/// Exit code for an error kind: 2 argument, 3 validation/convexity, 4 numerical, 5 resource.
int exit_code(ErrorKind kind);

/**
 * Method spec: "expm", "ode:<scheme>" or "sqr:<scheme>". For sqr the number
 * of doublings is `doublings` if non-negative, else log2(steps).
 */
DiscreteLqModel discretize_with(const ContinuousLqModel& model, const std::string& method,
                                long steps, int doublings);

/// Run the command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lqdisc::cli
