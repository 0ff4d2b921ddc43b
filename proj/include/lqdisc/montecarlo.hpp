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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lqdisc/model.hpp"
#include "lqdisc/stochastic.hpp"

namespace lqdisc {

struct McOptions {
  long n_sims = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  int bins = 60;
};

/// Per-replicate costs, indexed by replicate.
struct McSamples {
  /// EM trajectory with fine-grid quadrature of l_c.
  std::vector<double> continuous;
  /// Discrete stage costs plus the stochastic stage cost.
  std::vector<double> discrete;
  /// Isolated quadratic form in [x0; W].
  std::vector<double> em_form;
};

struct McStream {
  std::string name;
  double sample_mean = 0.0;
  double sample_var = 0.0;
  std::vector<long> counts;
};

struct McSummary {
  long n_sims = 0;
  std::uint64_t seed = 0;
  long n_sub = 0;
  double analytic_mean = 0.0;
  double analytic_var = 0.0;
  std::vector<double> bin_edges;
  std::array<McStream, 3> streams;
  /// Pairwise correlations: (continuous, discrete), (continuous, em_form), (discrete, em_form).
  std::array<double, 3> correlations{};
};

inline constexpr long kMcChunk = 64;

/**
 * Draw x0 ~ N(x0_mean, x0_cov) and increments dw ~ N(0, dt I) per replicate
 * and evaluate the three cost streams at the same sample.
 *
 * Replicate r uses only the generator stream (seed, r) and chunks of
 * kMcChunk replicates are evaluated as a unit, so the samples are bitwise
 * independent of `workers`.
 */
McSamples monte_carlo_samples(const ContinuousLqModel& model, const DiscreteLqModel& disc,
                              const EmReformulation& ref, const McOptions& opts);

McSummary monte_carlo(const ContinuousLqModel& model, const DiscreteLqModel& disc,
                      const EmReformulation& ref, const McOptions& opts);

/// Fixed-topology pairwise sum in index order.
double pairwise_sum(const std::vector<double>& v);

/// Sample Pearson correlation (two-pass, pairwise sums).
double correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace lqdisc
