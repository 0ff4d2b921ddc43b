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
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "lqdisc/disc_expm.hpp"
#include "lqdisc/disc_ode.hpp"
#include "lqdisc/errors.hpp"
#include "lqdisc/montecarlo.hpp"
#include "lqdisc/rng.hpp"
#include "lqdisc/stochastic.hpp"

namespace lqdisc {
namespace {

ContinuousLqModel noise_free_stiff_plant() {
  ContinuousLqModel m = testing::stiff_plant_model(4);
  m.g_c.setZero();
  m.x0_cov.setZero();
  return m;
}

double deterministic_cost(const ContinuousLqModel& m, const DiscreteLqModel& d) {
  double cost = 0.0;
  Vector x = m.x0_mean;
  for (std::size_t k = 0; k < d.horizon(); ++k) {
    cost += d.stage_cost(k, x, m.inputs[k]);
    x = d.a * x + d.b * m.inputs[k];
  }
  return cost;
}

TEST(EmReformulation, DeterministicLimit) {
  const ContinuousLqModel m = noise_free_stiff_plant();
  const DiscreteLqModel d = discretize_expm(m);
  const EmReformulation ref = em_reformulate(m, d, 16);
  EXPECT_EQ(ref.dim(), 2 + 4 * 16 * 2);
  EXPECT_EQ(ref.q_big.bottomRightCorner(ref.dim() - 2, ref.dim() - 2).cwiseAbs().maxCoeff(), 0.0);
  const double phi = 0.5 * ref.m_bar.dot(ref.q_big * ref.m_bar) + ref.q_vec.dot(ref.m_bar) + ref.rho;
  const double det = deterministic_cost(m, d);
  EXPECT_NEAR(phi, det, 1e-8 * std::max(1.0, std::abs(det)));
  const CostMoments mo = cost_moments(ref);
  EXPECT_NEAR(mo.mean, det, 1e-8 * std::max(1.0, std::abs(det)));
  EXPECT_NEAR(mo.variance, 0.0, 1e-12);
}

TEST(EmReformulation, StructuralInvariants) {
  const ContinuousLqModel m = testing::stiff_plant_model(2);
  const EmReformulation ref = em_reformulate(m, discretize_expm(m), 8);
  const Matrix q = ref.q_big;
  EXPECT_LE((q - q.transpose()).cwiseAbs().maxCoeff(), 1e-10);
  const Matrix p = ref.p_bar();
  EXPECT_EQ(Matrix(p.topLeftCorner(2, 2)), m.x0_cov);
  const Eigen::Index w = ref.dim() - 2;
  EXPECT_EQ(Matrix(p.bottomRightCorner(w, w)), Matrix(Matrix::Identity(w, w) * ref.dt));
  EXPECT_EQ(ref.dt, 1.0 / 8);
  EXPECT_EQ(Vector(ref.m_bar.head(2)), m.x0_mean);
  EXPECT_EQ(ref.m_bar.tail(w).cwiseAbs().maxCoeff(), 0.0);
}

TEST(EmReformulation, PureNoiseMoments) {
  const ContinuousLqModel m = testing::pure_noise_model();
  const DiscreteLqModel d = discretize_expm(m);
  double prev_mean_err = 0.0, prev_var_err = 0.0;
  for (long n : {256L, 512L, 1024L}) {
    const CostMoments mo = cost_moments(em_reformulate(m, d, n));
    const double mean_err = std::abs(mo.mean - 0.25);
    const double var_err = std::abs(mo.variance - 1.0 / 12);
    if (n == 1024) {
      EXPECT_LT(mean_err, 2e-3);
      EXPECT_LT(var_err, 5e-3);
    }
    if (prev_mean_err > 0.0) {
      EXPECT_NEAR(prev_mean_err / mean_err, 2.0, 0.1) << n;
      EXPECT_NEAR(prev_var_err / var_err, 2.0, 0.1) << n;
    }
    prev_mean_err = mean_err;
    prev_var_err = var_err;
  }
}

TEST(EmReformulation, StreamingMatchesMaterialized) {
  std::mt19937_64 rng(51);
  for (int t = 0; t < 5; ++t) {
    const ContinuousLqModel m = testing::random_model(rng, 1 + t % 3, t % 3, 1 + t % 2, 2, 3);
    const DiscreteLqModel d = discretize_expm(m);
    const long n = 4 + 4 * t;
    const CostMoments a = cost_moments(em_reformulate(m, d, n));
    const CostMoments b = streaming_moments(m, d, n);
    EXPECT_NEAR(a.mean, b.mean, 1e-9 * std::max(1.0, std::abs(a.mean))) << "trial " << t;
    EXPECT_NEAR(a.variance, b.variance, 1e-9 * std::max(1.0, std::abs(a.variance)))
        << "trial " << t;
  }
  const ContinuousLqModel m = testing::stiff_plant_model(4);
  const DiscreteLqModel d = discretize_expm(m);
  const CostMoments a = cost_moments(em_reformulate(m, d, 32));
  const CostMoments b = streaming_moments(m, d, 32);
  EXPECT_NEAR(a.mean, b.mean, 1e-9 * a.mean);
  EXPECT_NEAR(a.variance, b.variance, 1e-9 * a.variance);
}

TEST(EmReformulation, CapIsEnforced) {
  const ContinuousLqModel m = testing::stiff_plant_model(4);
  const DiscreteLqModel d = discretize_expm(m);
  EXPECT_EQ(em_dimension(m, 1024), 2 + 4 * 1024 * 2);
  try {
    em_reformulate(m, d, 1024);
    FAIL() << "expected ResourceError";
  } catch (const ResourceError& e) {
    EXPECT_EQ(e.requested(), 8194);
    EXPECT_NE(std::string(e.what()).find("8194"), std::string::npos);
  }
  // The streaming path has no cap.
  EXPECT_GT(streaming_moments(m, d, 1024).mean, 0.0);
  EXPECT_THROW(em_reformulate(m, d, 0), Error);
}

TEST(PropagateCovariance, Examples) {
  DiscreteLqModel d;
  d.a = Matrix::Zero(2, 2);
  d.r_ww = Matrix{{2.0, 0.5}, {0.5, 1.0}};
  auto ps = propagate_covariance(d, Matrix::Identity(2, 2), 3);
  ASSERT_EQ(ps.size(), 4u);
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(ps[k], d.r_ww);

  d.a = Matrix::Identity(2, 2);
  d.r_ww.setZero();
  const Matrix p0{{1.0, 0.2}, {0.2, 3.0}};
  ps = propagate_covariance(d, p0, 5);
  for (const Matrix& p : ps) EXPECT_EQ(p, p0);

  d.a = Matrix::Constant(1, 1, 0.5);
  d.r_ww = Matrix::Constant(1, 1, 0.75);
  ps = propagate_covariance(d, Matrix::Zero(1, 1), 60);
  EXPECT_NEAR(ps.back()(0, 0), 1.0, 1e-15);
}

TEST(ExpectedCost, CertaintyCase) {
  const ContinuousLqModel m = noise_free_stiff_plant();
  const DiscreteLqModel d = discretize_expm(m);
  EXPECT_NEAR(expected_cost(m, d, m.x0_cov), deterministic_cost(m, d), 1e-12);
}

TEST(ExpectedCost, StiffPlant) {
  const ContinuousLqModel m = testing::stiff_plant_model(4);
  const DiscreteLqModel d = discretize_expm(m);
  const double psi = expected_cost(m, d, m.x0_cov);
  EXPECT_NEAR(psi, 6.36, 0.01 * 6.36);
  const double psi_em = expected_cost(m, d, m.x0_cov, noise_trace_em(m, 256));
  EXPECT_NEAR(psi_em, 6.36, 0.01 * 6.36);
}

TEST(ExpectedCost, PureNoise) {
  const ContinuousLqModel m = testing::pure_noise_model();
  EXPECT_NEAR(expected_cost(m, discretize_expm(m), m.x0_cov), 0.25, 1e-14);
  EXPECT_NEAR(noise_trace_em(m, 64), 0.5 * (1.0 + 1.0 / 64), 1e-14);
  EXPECT_NEAR(noise_trace_ode(m, Scheme::kClassicRk4, 8), 0.5, 1e-14);
}

TEST(ExpectedCost, EmMeanConvergesAtFirstOrder) {
  const ContinuousLqModel m = testing::stiff_plant_model(4);
  const DiscreteLqModel d = discretize_expm(m);
  const double psi = expected_cost(m, d, m.x0_cov, noise_trace_ode(m, Scheme::kClassicRk4, 4096));
  double prev = 0.0;
  for (long n : {64L, 128L, 256L, 512L}) {
    const double gap = std::abs(streaming_moments(m, d, n).mean - psi);
    if (prev > 0.0) EXPECT_GE(prev / gap, 1.8) << "n_sub=" << n;
    prev = gap;
  }
}

TEST(MonteCarlo, NoiseFreeStreamsAgree) {
  const ContinuousLqModel m = noise_free_stiff_plant();
  const DiscreteLqModel d = discretize_expm(m);
  const EmReformulation ref = em_reformulate(m, d, 64);
  McOptions opts;
  opts.n_sims = 1;
  opts.seed = 99;
  const McSamples s = monte_carlo_samples(m, d, ref, opts);
  const double det = deterministic_cost(m, d);
  // Stream (a) is the right-endpoint quadrature of the EM path: O(dt) from exact.
  EXPECT_NEAR(s.discrete[0], det, 1e-8 * det);
  EXPECT_NEAR(s.em_form[0], det, 1e-8 * det);
  EXPECT_NEAR(s.continuous[0], det, 0.05 * det);
}

TEST(MonteCarlo, DiscreteStreamEqualsQuadraticForm) {
  const ContinuousLqModel m = testing::stiff_plant_model(4);
  const DiscreteLqModel d = discretize_expm(m);
  const EmReformulation ref = em_reformulate(m, d, 32);
  McOptions opts;
  opts.n_sims = 100;
  opts.seed = 2024;
  const McSamples s = monte_carlo_samples(m, d, ref, opts);
  for (long r = 0; r < opts.n_sims; ++r) {
    EXPECT_NEAR(s.discrete[r], s.em_form[r], 1e-8 * std::abs(s.em_form[r])) << "replicate " << r;
  }
}

TEST(MonteCarlo, WorkerCountDoesNotChangeResults) {
  const ContinuousLqModel m = testing::stiff_plant_model(2);
  const DiscreteLqModel d = discretize_expm(m);
  const EmReformulation ref = em_reformulate(m, d, 16);
  McOptions opts;
  opts.n_sims = 300;
  opts.seed = 5;
  const McSamples one = monte_carlo_samples(m, d, ref, opts);
  opts.workers = 3;
  const McSamples three = monte_carlo_samples(m, d, ref, opts);
  EXPECT_EQ(one.continuous, three.continuous);
  EXPECT_EQ(one.discrete, three.discrete);
  EXPECT_EQ(one.em_form, three.em_form);
  opts.seed = 6;
  EXPECT_NE(monte_carlo_samples(m, d, ref, opts).em_form, one.em_form);
}

TEST(MonteCarlo, PureNoiseMean) {
  const ContinuousLqModel m = testing::pure_noise_model();
  const DiscreteLqModel d = discretize_expm(m);
  const EmReformulation ref = em_reformulate(m, d, 256);
  McOptions opts;
  opts.n_sims = 30000;
  opts.seed = 17;
  const McSummary s = monte_carlo(m, d, ref, opts);
  const McStream& em = s.streams[2];
  const double se = std::sqrt(em.sample_var / s.n_sims);
  EXPECT_LT(std::abs(em.sample_mean - 0.25), 3.0 * se);
  EXPECT_NEAR(s.analytic_mean, 0.25 * (1.0 + 1.0 / 256), 1e-12);
}

TEST(MonteCarlo, StiffPlantSummary) {
  const ContinuousLqModel m = testing::stiff_plant_model(4);
  const DiscreteLqModel d = discretize_expm(m);
  const EmReformulation ref = em_reformulate(m, d, 64);
  McOptions opts;
  opts.n_sims = 2000;
  opts.seed = 3;
  opts.bins = 40;
  const McSummary s = monte_carlo(m, d, ref, opts);
  EXPECT_EQ(s.bin_edges.size(), 41u);
  for (const McStream& st : s.streams) {
    long total = 0;
    for (long c : st.counts) total += c;
    EXPECT_EQ(total, opts.n_sims) << st.name;
    EXPECT_GE(st.sample_var, 0.0);
  }
  for (double c : s.correlations) EXPECT_GT(c, 0.99);
  const double se = std::sqrt(s.streams[2].sample_var / s.n_sims);
  EXPECT_LT(std::abs(s.streams[2].sample_mean - s.analytic_mean), 3.0 * se);
}

TEST(MonteCarlo, ArgumentChecks) {
  const ContinuousLqModel m = testing::pure_noise_model();
  const DiscreteLqModel d = discretize_expm(m);
  const EmReformulation ref = em_reformulate(m, d, 4);
  McOptions opts;
  opts.n_sims = 0;
  EXPECT_THROW(monte_carlo(m, d, ref, opts), Error);
  opts.n_sims = 1;
  opts.workers = 0;
  EXPECT_THROW(monte_carlo(m, d, ref, opts), Error);
}

TEST(PairwiseSum, Exactness) {
  std::vector<double> v(1000, 0.1);
  EXPECT_NEAR(pairwise_sum(v), 100.0, 1e-12);
  EXPECT_EQ(pairwise_sum({}), 0.0);
  EXPECT_NEAR(correlation({1, 2, 3, 4}, {2, 4, 6, 8}), 1.0, 1e-15);
  EXPECT_NEAR(correlation({1, 2, 3, 4}, {8, 6, 4, 2}), -1.0, 1e-15);
}

TEST(Philox, KnownAnswers) {
  using C = Philox4x32::Counter;
  EXPECT_EQ(Philox4x32::block({0, 0, 0, 0}, {0, 0}),
            (C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
  EXPECT_EQ(Philox4x32::block({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}),
            (C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
  EXPECT_EQ(Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                              {0xa4093822u, 0x299f31d0u}),
            (C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(ReplicateStream, UniformsAreOpenInterval) {
  EXPECT_GT(ReplicateStream::to_unit(0, 0), 0.0);
  EXPECT_LT(ReplicateStream::to_unit(~0u, ~0u), 1.0);
}

TEST(ReplicateStream, GaussianMoments) {
  ReplicateStream rs(123, 4);
  const int n = 200000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rs.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s1 / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.015);
  EXPECT_NEAR(s4 / n, 3.0, 0.08);
}

TEST(ReplicateStream, DependsOnlyOnSeedAndReplicate) {
  ReplicateStream a(7, 11), b(7, 11), c(7, 12), e(8, 11);
  for (int i = 0; i < 10; ++i) {
    const double x = a.normal();
    EXPECT_EQ(x, b.normal());
    EXPECT_NE(x, c.normal());
    EXPECT_NE(x, e.normal());
  }
}

}  // namespace
}  // namespace lqdisc
