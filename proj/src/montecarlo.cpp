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
#include "lqdisc/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <Eigen/Eigenvalues>

#include "lqdisc/errors.hpp"
#include "lqdisc/rng.hpp"

namespace lqdisc {

namespace {

double pairwise_range(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_range(v, half) + pairwise_range(v + half, n - half);
}

double sample_mean(const std::vector<double>& v) {
  return pairwise_sum(v) / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
  return pairwise_sum(sq) / static_cast<double>(v.size() - 1);
}

Matrix psd_sqrt(const Matrix& p) {
  if (p.size() == 0) return p;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(p);
  const Vector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

// Everything a replicate needs, computed once.
struct Evaluator {
  const ContinuousLqModel& model;
  const DiscreteLqModel& disc;
  const EmReformulation& ref;
  Matrix x0_root;
  Matrix step;
  Matrix q_ww;
  Matrix cq;
  std::vector<Vector> dt_bu;
  // Per interval, with e = D_c u - zbar: lin = C_c' Q_c e, offset = 1/2 e' Q_c e.
  std::vector<Vector> lin;
  std::vector<double> offset;
  double sqrt_dt;
  // y'Qy = y' T y with T lower triangular: diagonal of Q, strict lower part doubled.
  Matrix q_tri;

  Evaluator(const ContinuousLqModel& m, const DiscreteLqModel& d, const EmReformulation& r)
      : model(m), disc(d), ref(r) {
    const Eigen::Index nx = m.nx();
    x0_root = psd_sqrt(m.x0_cov);
    step = Matrix::Identity(nx, nx) + r.dt * m.a_c;
    q_ww = m.noise_weight();
    cq = m.c_c.transpose() * m.q_c;
    for (std::size_t k = 0; k < m.horizon(); ++k) {
      const Vector& u = m.inputs[k];
      const Vector e = m.d_c * u - m.targets[k];
      dt_bu.push_back(r.dt * (m.b_c * u));
      lin.push_back(cq * e);
      offset.push_back(0.5 * e.dot(m.q_c * e));
    }
    sqrt_dt = std::sqrt(r.dt);
    q_tri = r.q_big.triangularView<Eigen::StrictlyLower>();
    q_tri *= 2.0;
    q_tri.diagonal() = r.q_big.diagonal();
  }

  void draw(std::uint64_t seed, std::uint64_t replicate, Eigen::Ref<Vector> y) const {
    ReplicateStream rs(seed, replicate);
    const Eigen::Index nx = model.nx();
    Vector z(nx);
    for (Eigen::Index i = 0; i < nx; ++i) z(i) = rs.normal();
    y.head(nx) = model.x0_mean + x0_root * z;
    for (Eigen::Index i = nx; i < y.size(); ++i) y(i) = sqrt_dt * rs.normal();
  }

  double continuous_cost(const Eigen::Ref<const Vector>& y) const {
    const Eigen::Index nx = model.nx();
    const Eigen::Index nw = model.nw();
    const double dt = ref.dt;
    Vector x = y.head(nx);
    Vector next(nx), qx(nx);
    Eigen::Index pos = nx;
    double cost = 0.0;
    for (std::size_t k = 0; k < model.horizon(); ++k) {
      for (long i = 0; i < ref.n_sub; ++i, pos += nw) {
        next.noalias() = step * x;
        next += dt_bu[k];
        next.noalias() += model.g_c * y.segment(pos, nw);
        x.swap(next);
        qx.noalias() = q_ww * x;
        cost += dt * (0.5 * x.dot(qx) + x.dot(lin[k]) + offset[k]);
      }
    }
    return cost;
  }

  double discrete_cost(const Eigen::Ref<const Vector>& y) const {
    const Eigen::Index nx = model.nx();
    const Eigen::Index nw = model.nw();
    const double dt = ref.dt;
    Vector x = y.head(nx);
    Vector det(nx), w(nx), next(nx), qw(nx), gain(nx);
    Eigen::Index pos = nx;
    double cost = 0.0;
    for (std::size_t k = 0; k < model.horizon(); ++k) {
      const Vector& u = model.inputs[k];
      cost += disc.stage_cost(k, x, u);
      det = x;
      w.setZero();
      for (long i = 0; i < ref.n_sub; ++i, pos += nw) {
        next.noalias() = step * det;
        next += dt_bu[k];
        det.swap(next);
        next.noalias() = step * w;
        next.noalias() += model.g_c * y.segment(pos, nw);
        w.swap(next);
        qw.noalias() = q_ww * w;
        gain.noalias() = q_ww * det;
        gain += lin[k];
        cost += dt * (0.5 * w.dot(qw) + gain.dot(w));
      }
      next.noalias() = disc.a * x;
      next.noalias() += disc.b * u;
      x = next + w;
    }
    return cost;
  }
};

void run_chunk(const Evaluator& ev, std::uint64_t seed, long first, long count, McSamples& out) {
  const Eigen::Index d = ev.ref.dim();
  Matrix y(d, count);
  for (long j = 0; j < count; ++j) {
    ev.draw(seed, static_cast<std::uint64_t>(first + j), y.col(j));
  }
  Matrix qy(d, count);
  qy.noalias() = ev.q_tri.triangularView<Eigen::Lower>() * y;
  for (long j = 0; j < count; ++j) {
    const auto col = y.col(j);
    out.continuous[first + j] = ev.continuous_cost(col);
    out.discrete[first + j] = ev.discrete_cost(col);
    out.em_form[first + j] = 0.5 * col.dot(qy.col(j)) + ev.ref.q_vec.dot(col) + ev.ref.rho;
  }
}

}  // namespace

double pairwise_sum(const std::vector<double>& v) { return pairwise_range(v.data(), v.size()); }

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  const double ma = sample_mean(a);
  const double mb = sample_mean(b);
  std::vector<double> ab(a.size()), aa(a.size()), bb(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab[i] = (a[i] - ma) * (b[i] - mb);
    aa[i] = (a[i] - ma) * (a[i] - ma);
    bb[i] = (b[i] - mb) * (b[i] - mb);
  }
  const double den = std::sqrt(pairwise_sum(aa) * pairwise_sum(bb));
  return den > 0.0 ? pairwise_sum(ab) / den : 0.0;
}

McSamples monte_carlo_samples(const ContinuousLqModel& model, const DiscreteLqModel& disc,
                              const EmReformulation& ref, const McOptions& opts) {
  if (opts.n_sims < 1) {
    throw Error(ErrorKind::kArgument, "n_sims must be >= 1, got " + std::to_string(opts.n_sims));
  }
  if (opts.workers < 1) {
    throw Error(ErrorKind::kArgument, "workers must be >= 1, got " + std::to_string(opts.workers));
  }
  if (ref.horizon != model.horizon() || ref.nx != model.nx() || ref.nw != model.nw()) {
    throw ValidationError("EM reformulation does not match the model");
  }

  const Evaluator ev(model, disc, ref);
  McSamples out;
  out.continuous.assign(opts.n_sims, 0.0);
  out.discrete.assign(opts.n_sims, 0.0);
  out.em_form.assign(opts.n_sims, 0.0);

  const long n_chunks = (opts.n_sims + kMcChunk - 1) / kMcChunk;
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&]() {
    try {
      for (long c = next++; c < n_chunks; c = next++) {
        const long first = c * kMcChunk;
        run_chunk(ev, opts.seed, first, std::min(kMcChunk, opts.n_sims - first), out);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  const int n_threads = static_cast<int>(std::min<long>(opts.workers, n_chunks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

McSummary monte_carlo(const ContinuousLqModel& model, const DiscreteLqModel& disc,
                      const EmReformulation& ref, const McOptions& opts) {
  if (opts.bins < 1) {
    throw Error(ErrorKind::kArgument, "bins must be >= 1, got " + std::to_string(opts.bins));
  }
  const McSamples samples = monte_carlo_samples(model, disc, ref, opts);
  const CostMoments analytic = cost_moments(ref);

  McSummary sum;
  sum.n_sims = opts.n_sims;
  sum.seed = opts.seed;
  sum.n_sub = ref.n_sub;
  sum.analytic_mean = analytic.mean;
  sum.analytic_var = analytic.variance;

  const double sd = std::sqrt(std::max(analytic.variance, 0.0));
  const double lo = std::max(0.0, analytic.mean - 4.0 * sd);
  double hi = analytic.mean + 8.0 * sd;
  if (!(hi > lo)) hi = lo + 1.0;
  sum.bin_edges.resize(opts.bins + 1);
  for (int i = 0; i <= opts.bins; ++i) {
    sum.bin_edges[i] = lo + (hi - lo) * static_cast<double>(i) / opts.bins;
  }

  const std::vector<double>* series[3] = {&samples.continuous, &samples.discrete,
                                          &samples.em_form};
  const char* names[3] = {"continuous", "discrete", "em_form"};
  for (int s = 0; s < 3; ++s) {
    McStream& st = sum.streams[s];
    st.name = names[s];
    st.sample_mean = sample_mean(*series[s]);
    st.sample_var = sample_variance(*series[s], st.sample_mean);
    st.counts.assign(opts.bins, 0);
    for (double v : *series[s]) {
      double pos = (v - lo) / (hi - lo) * opts.bins;
      if (!(pos >= 0.0)) pos = 0.0;
      const long bin = static_cast<long>(std::min(pos, static_cast<double>(opts.bins - 1)));
      ++st.counts[bin];
    }
  }
  sum.correlations = {correlation(samples.continuous, samples.discrete),
                      correlation(samples.continuous, samples.em_form),
                      correlation(samples.discrete, samples.em_form)};
  return sum;
}

}  // namespace lqdisc
