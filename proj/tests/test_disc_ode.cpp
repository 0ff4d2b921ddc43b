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
#include "lqdisc/densela.hpp"
#include "lqdisc/disc_expm.hpp"
#include "lqdisc/disc_ode.hpp"
#include "lqdisc/errors.hpp"
#include "lqdisc/oracle.hpp"

namespace lqdisc {
namespace {

using testing::max_rel_diff;

double max_err(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Least-squares slope of log(err) against log(h).
double fitted_order(const std::vector<double>& hs, const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(hs.size());
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double x = std::log(hs[i]), y = std::log(errs[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TEST(DiscretizeOde, ScalarIntegrator) {
  const DiscreteLqModel d =
      discretize_ode(testing::scalar_integrator_model(), Scheme::kClassicRk4, 64);
  EXPECT_NEAR(d.a(0, 0), 1.0, 1e-10);
  EXPECT_NEAR(d.b(0, 0), 1.0, 1e-10);
  EXPECT_LT(max_err(d.q, Matrix{{1.0, 0.5}, {0.5, 1.0 / 3}}), 1e-10);
  EXPECT_LT(max_err(d.m, Matrix{{-1.0}, {-0.5}}), 1e-10);
}

TEST(DiscretizeOde, PureDiffusionNoiseCovariance) {
  ContinuousLqModel m = testing::pure_noise_model();
  m.t_s = 2.0;
  for (Scheme s : kAllSchemes) {
    const DiscreteLqModel d = discretize_ode(m, s, 8);
    EXPECT_NEAR(d.r_ww(0, 0), 2.0, 1e-14) << to_string(s);
  }
}

TEST(DiscretizeOde, NoiseTraceOfPureDiffusion) {
  // tr(Q_ww R_ww(t)) = t, integral 1/2 over a unit interval.
  double s = 0.0;
  discretize_ode(testing::pure_noise_model(), Scheme::kClassicRk4, 16, s);
  EXPECT_NEAR(s, 0.5, 1e-14);
}

TEST(DiscretizeOde, StiffPlantAgainstExpm) {
  const ContinuousLqModel m = testing::stiff_plant_model(1);
  const DiscreteLqModel truth = discretize_expm(m);
  const DiscreteLqModel d = discretize_ode(m, Scheme::kClassicRk4, 256);
  EXPECT_LT(max_err(d.a, truth.a), 1e-10);
  EXPECT_LT(max_err(d.b, truth.b), 1e-10);
  EXPECT_LT(max_err(d.m, truth.m), 1e-10);
  // Q and R_ww carry the O(h^4) error of the e^{-17 t} modes at N = 256.
  EXPECT_LT(max_err(d.q, truth.q), 1e-6);
  EXPECT_LT(max_err(d.r_ww, truth.r_ww), 1e-8);
}

TEST(DiscretizeOde, ExactnessOfA) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const ContinuousLqModel m = testing::random_model(rng, 1 + t % 4, 1 + t % 2, 2, 2);
    const DiscreteLqModel d = discretize_ode(m, Scheme::kClassicRk4, 256);
    const Matrix e = expm(Matrix(m.a_c * m.t_s));
    EXPECT_LE((d.a - e).cwiseAbs().rowwise().sum().maxCoeff(), 1e-9) << "trial " << t;
  }
}

TEST(DiscretizeOde, Semigroup) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    ContinuousLqModel m = testing::random_model(rng, 3, 2, 2, 3);
    const DiscreteLqModel one = discretize_ode(m, Scheme::kClassicRk4, 64);
    m.t_s *= 2.0;
    const DiscreteLqModel two = discretize_ode(m, Scheme::kClassicRk4, 128);
    EXPECT_LT(max_err(two.a, one.a * one.a), 1e-10);
    EXPECT_LT(max_err(two.b, one.a * one.b + one.b), 1e-10);
  }
}

TEST(DiscretizeOde, WeightsArePsd) {
  std::mt19937_64 rng(10);
  const ContinuousLqModel m = testing::random_model(rng, 3, 2, 2, 3);
  for (Scheme s : kAllSchemes) {
    const DiscreteLqModel d = discretize_ode(m, s, 16);
    EXPECT_TRUE(validate(d).ok()) << to_string(s) << ": " << validate(d).joined();
    EXPECT_EQ(d.q, d.q.transpose());
    EXPECT_EQ(d.r_ww, d.r_ww.transpose());
  }
}

TEST(DiscretizeOde, ConvergenceOrders) {
  std::mt19937_64 rng(12);
  const ContinuousLqModel m = testing::random_model(rng, 3, 2, 2, 3);
  const DiscreteLqModel truth = discretize_expm(m);
  for (Scheme s : kAllSchemes) {
    std::vector<double> hs, ea, eb;
    for (int j = 4; j <= 8; ++j) {
      const long n = 1L << j;
      const DiscreteLqModel d = discretize_ode(m, s, n);
      const double a_err = max_err(d.a, truth.a);
      const double b_err = max_err(d.b, truth.b);
      if (a_err < 1e-12 || b_err < 1e-12) continue;
      hs.push_back(m.t_s / static_cast<double>(n));
      ea.push_back(a_err);
      eb.push_back(b_err);
    }
    ASSERT_GE(hs.size(), 3u) << to_string(s);
    const double p = tableau(s).order;
    EXPECT_NEAR(fitted_order(hs, ea), p, 0.3) << to_string(s);
    EXPECT_NEAR(fitted_order(hs, eb), p, 0.3) << to_string(s);
  }
}

TEST(DiscretizeOde, CostEquivalenceAgainstQuadrature) {
  const ContinuousLqModel m = testing::stiff_plant_model(1);
  const DiscreteLqModel d = discretize_ode(m, Scheme::kClassicRk4, 1024);
  std::mt19937_64 rng(13);
  for (int t = 0; t < 20; ++t) {
    const Vector x = testing::random_vector(rng, 2);
    const Vector u = testing::random_vector(rng, 2);
    const Vector zbar = testing::random_vector(rng, 3);
    Vector xi(4);
    xi << x, u;
    const double rho = 0.5 * zbar.dot(m.q_c * zbar) * m.t_s;
    const double disc_cost = 0.5 * xi.dot(d.q * xi) + (d.m * zbar).dot(xi) + rho;
    const double ref = oracle_cost(m, x, u, zbar);
    EXPECT_NEAR(disc_cost, ref, 1e-6 * std::abs(ref)) << "trial " << t;
  }
}

TEST(DiscretizeOde, StiffExplicitEulerDiverges) {
  ContinuousLqModel m = testing::scalar_integrator_model();
  m.a_c(0, 0) = -1e5;
  try {
    discretize_ode(m, Scheme::kExplicitEuler, 128);
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDivergence);
    EXPECT_GT(e.step(), 0);
    EXPECT_LE(e.step(), 128);
    EXPECT_NE(std::string(e.what()).find("step " + std::to_string(e.step())), std::string::npos);
  }
}

TEST(DiscretizeOde, StateCounter) {
  const ContinuousLqModel m = testing::stiff_plant_model(1);
  const ButcherTableau tab = tableau(Scheme::kExplicitTrapezoidal);
  const OdeState st = integrate_ode(m, tab, precompute(m, tab, 32), 32);
  EXPECT_EQ(st.k, 32);
}

TEST(DiscretizeOde, RejectsInvalidModel) {
  ContinuousLqModel m = testing::stiff_plant_model(1);
  m.t_s = -1.0;
  EXPECT_THROW(discretize_ode(m, Scheme::kClassicRk4, 4), ValidationError);
}

}  // namespace
}  // namespace lqdisc
