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
#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lqdisc/butcher.hpp"
#include "lqdisc/densela.hpp"
#include "lqdisc/disc_expm.hpp"
#include "lqdisc/disc_ode.hpp"
#include "lqdisc/disc_sqr.hpp"
#include "lqdisc/lqsolve.hpp"
#include "lqdisc/model_io.hpp"
#include "lqdisc/montecarlo.hpp"
#include "lqdisc/stochastic.hpp"

namespace lqdisc::cli {

namespace {

std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

int doublings_for(long steps) {
  if (steps < 1 || (steps & (steps - 1)) != 0) {
    throw Error(ErrorKind::kArgument,
                "sqr needs --doubling or a power-of-two --steps, got " + std::to_string(steps));
  }
  int j = 0;
  while ((1L << j) < steps) ++j;
  return j;
}

std::vector<Scheme> parse_schemes(const std::string& list) {
  if (list.empty() || list == "all") return {std::begin(kAllSchemes), std::end(kAllSchemes)};
  std::vector<Scheme> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_scheme(item));
  }
  if (out.empty()) throw Error(ErrorKind::kArgument, "empty scheme list");
  return out;
}

double median_seconds(const std::function<void()>& fn, int reps) {
  using clock = std::chrono::steady_clock;
  for (int i = 0; i < 2; ++i) fn();
  std::vector<double> t;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = clock::now();
    fn();
    t.push_back(std::chrono::duration<double>(clock::now() - t0).count());
  }
  std::sort(t.begin(), t.end());
  return reps % 2 ? t[reps / 2] : 0.5 * (t[reps / 2 - 1] + t[reps / 2]);
}

std::string error_row(const std::string& scheme, const char* method, long n,
                      const DiscreteLqModel& d, const DiscreteLqModel& truth, double secs) {
  return scheme + "," + method + "," + std::to_string(n) + "," + num(max_abs(d.a - truth.a)) +
         "," + num(max_abs(d.b - truth.b)) + "," + num(max_abs(d.r_ww - truth.r_ww)) + "," +
         num(max_abs(d.m - truth.m)) + "," + num(max_abs(d.q - truth.q)) + "," + num(secs) +
         "\n";
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

int workers_default() {
  if (const char* env = std::getenv("LQDISC_WORKERS")) {
    char* end = nullptr;
    const long w = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || w < 1) {
      throw Error(ErrorKind::kArgument, std::string("invalid LQDISC_WORKERS=") + env);
    }
    return static_cast<int>(w);
  }
  return 1;
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArgument:
      return 2;
    case ErrorKind::kValidation:
    case ErrorKind::kConvexity:
      return 3;
    case ErrorKind::kDivergence:
    case ErrorKind::kSingular:
      return 4;
    case ErrorKind::kResource:
      return 5;
  }
  return 1;
}

DiscreteLqModel discretize_with(const ContinuousLqModel& model, const std::string& method,
                                long steps, int doublings) {
  if (method == "expm") return discretize_expm(model);
  const auto colon = method.find(':');
  const std::string family = method.substr(0, colon);
  if (colon == std::string::npos || (family != "ode" && family != "sqr")) {
    throw Error(ErrorKind::kArgument,
                "method must be expm, ode:<scheme> or sqr:<scheme>, got " + method);
  }
  const Scheme scheme = parse_scheme(method.substr(colon + 1));
  if (family == "ode") {
    if (steps < 1) throw Error(ErrorKind::kArgument, "--steps must be >= 1");
    return discretize_ode(model, scheme, steps);
  }
  return discretize_step_doubling(model, scheme, doublings >= 0 ? doublings : doublings_for(steps));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete-time equivalents of continuous-time LQ problems", "lqdisc"};
  app.require_subcommand(1);

  std::string model_path, method = "expm", output, schemes, histogram, summary;
  long steps = 256;
  int doublings = -1, max_exp = 8, reps = 9, workers = 0, bins = 60;
  long sims = 1000, subdiv = 256, trace_steps = 256, cap = kDefaultEmCap;
  std::uint64_t seed = 0;

  auto add_method = [&](CLI::App* sub) {
    sub->add_option("--method", method, "expm | ode:<scheme> | sqr:<scheme>");
    sub->add_option("--steps", steps, "Integration steps N")->check(CLI::PositiveNumber);
    sub->add_option("--doubling", doublings, "Doublings j for sqr (N = 2^j)")
        ->check(CLI::Range(0, 62));
  };

  CLI::App* disc_cmd = app.add_subcommand("discretize", "Write the discrete model as JSON");
  disc_cmd->add_option("--model", model_path, "Model JSON file")->required();
  add_method(disc_cmd);
  disc_cmd->add_option("--output", output, "Output JSON file (default: stdout)");

  CLI::App* bench_cmd = app.add_subcommand("benchmark", "Error and CPU time vs expm truth");
  bench_cmd->add_option("--model", model_path, "Model JSON file")->required();
  bench_cmd->add_option("--schemes", schemes, "Comma-separated schemes or 'all'");
  bench_cmd->add_option("--max-exp", max_exp, "Largest J, N = 2^0..2^J")->check(CLI::Range(0, 20));
  bench_cmd->add_option("--reps", reps, "Timed repetitions per cell")->check(CLI::Range(1, 1000));
  bench_cmd->add_option("--output", output, "Output CSV file (default: stdout)");

  CLI::App* mc_cmd = app.add_subcommand("montecarlo", "Monte Carlo cost distribution");
  mc_cmd->add_option("--model", model_path, "Model JSON file")->required();
  add_method(mc_cmd);
  mc_cmd->add_option("--sims", sims, "Replicates")->check(CLI::PositiveNumber);
  mc_cmd->add_option("--seed", seed, "64-bit seed");
  mc_cmd->add_option("--subdiv", subdiv, "EM sub-steps per interval")->check(CLI::PositiveNumber);
  mc_cmd->add_option("--workers", workers, "Worker threads (default: LQDISC_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  mc_cmd->add_option("--bins", bins, "Histogram bins")->check(CLI::Range(1, 100000));
  mc_cmd->add_option("--cap", cap, "Maximum EM dimension")->check(CLI::PositiveNumber);
  mc_cmd->add_option("--histogram", histogram, "Histogram CSV file");
  mc_cmd->add_option("--summary", summary, "Summary JSON file (default: stdout)");

  CLI::App* ec_cmd = app.add_subcommand("expected-cost", "Certainty-equivalent expected cost");
  ec_cmd->add_option("--model", model_path, "Model JSON file")->required();
  add_method(ec_cmd);
  ec_cmd->add_option("--subdiv", subdiv, "EM sub-steps for the noise trace")
      ->check(CLI::PositiveNumber);
  ec_cmd->add_option("--trace-steps", trace_steps, "RK4 steps for the noise trace")
      ->check(CLI::PositiveNumber);

  CLI::App* solve_cmd = app.add_subcommand("solve", "Optimal trajectory of the discrete problem");
  solve_cmd->add_option("--model", model_path, "Model JSON file")->required();
  add_method(solve_cmd);
  solve_cmd->add_option("--output", output, "Output CSV file (default: stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "lqdisc: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    const ContinuousLqModel model = load_model(model_path);

    if (disc_cmd->parsed()) {
      const DiscreteLqModel disc = discretize_with(model, method, steps, doublings);
      const std::string text = to_json(disc).dump(2) + "\n";
      emit(output, text, out);
      if (!output.empty()) {
        out << "method " << method << ", nx " << disc.nx() << ", nu " << disc.nu()
            << ", horizon " << disc.horizon() << ", written to " << output << "\n";
      }
    } else if (bench_cmd->parsed()) {
      const DiscreteLqModel truth = discretize_expm(model);
      std::string csv = "scheme,method,N,e_A,e_B,e_Rww,e_M,e_Q,cpu_seconds\n";
      const double t_expm = median_seconds([&] { discretize_expm(model); }, reps);
      csv += error_row("-", "expm", 1, truth, truth, t_expm);
      for (Scheme s : parse_schemes(schemes)) {
        const std::string name(to_string(s));
        for (int j = 0; j <= max_exp; ++j) {
          const long n = 1L << j;
          try {
            const DiscreteLqModel d = discretize_ode(model, s, n);
            const double t = median_seconds([&] { discretize_ode(model, s, n); }, reps);
            csv += error_row(name, "ode", n, d, truth, t);
          } catch (const DivergenceError& e) {
            err << "lqdisc: skipped " << name << " ode N=" << n << ": " << e.what() << "\n";
          }
          try {
            const DiscreteLqModel d = discretize_step_doubling(model, s, j);
            const double t = median_seconds([&] { discretize_step_doubling(model, s, j); }, reps);
            csv += error_row(name, "sqr", n, d, truth, t);
          } catch (const DivergenceError& e) {
            err << "lqdisc: skipped " << name << " sqr N=" << n << ": " << e.what() << "\n";
          }
        }
      }
      emit(output, csv, out);
    } else if (mc_cmd->parsed()) {
      const DiscreteLqModel disc = discretize_with(model, method, steps, doublings);
      const EmReformulation ref = em_reformulate(model, disc, subdiv, cap);
      McOptions opts;
      opts.n_sims = sims;
      opts.seed = seed;
      opts.workers = workers > 0 ? workers : workers_default();
      opts.bins = bins;
      const McSummary res = monte_carlo(model, disc, ref, opts);

      nlohmann::json j;
      j["n_sims"] = res.n_sims;
      j["seed"] = res.seed;
      j["n_sub"] = res.n_sub;
      j["method"] = method;
      j["analytic"] = {{"mean", res.analytic_mean}, {"variance", res.analytic_var}};
      nlohmann::json streams = nlohmann::json::object();
      for (const McStream& st : res.streams) {
        streams[st.name] = {
            {"sample_mean", st.sample_mean},
            {"sample_var", st.sample_var},
            {"std_error", std::sqrt(st.sample_var / static_cast<double>(res.n_sims))},
            {"counts", st.counts}};
      }
      j["streams"] = streams;
      j["bin_edges"] = res.bin_edges;
      j["correlations"] = {{"continuous_discrete", res.correlations[0]},
                           {"continuous_em_form", res.correlations[1]},
                           {"discrete_em_form", res.correlations[2]}};
      if (!histogram.empty()) {
        std::string csv = "bin_lo,bin_hi,continuous,discrete,em_form\n";
        for (int b = 0; b < bins; ++b) {
          csv += num(res.bin_edges[b]) + "," + num(res.bin_edges[b + 1]) + "," +
                 std::to_string(res.streams[0].counts[b]) + "," +
                 std::to_string(res.streams[1].counts[b]) + "," +
                 std::to_string(res.streams[2].counts[b]) + "\n";
        }
        write_text_file(histogram, csv);
      }
      emit(summary, j.dump(2) + "\n", out);
    } else if (ec_cmd->parsed()) {
      const DiscreteLqModel disc = discretize_with(model, method, steps, doublings);
      const double s_ode = noise_trace_ode(model, Scheme::kClassicRk4, trace_steps);
      const double s_em = noise_trace_em(model, subdiv);
      out << "psi_ode_trace " << num(expected_cost(model, disc, model.x0_cov, s_ode)) << "\n"
          << "psi_em_trace " << num(expected_cost(model, disc, model.x0_cov, s_em)) << "\n"
          << "noise_trace_ode " << num(s_ode) << "\n"
          << "noise_trace_em " << num(s_em) << "\n";
    } else if (solve_cmd->parsed()) {
      const DiscreteLqModel disc = discretize_with(model, method, steps, doublings);
      const LqSolution sol = solve_finite_horizon(disc, model.x0_mean);
      std::string csv = "k";
      for (Eigen::Index i = 0; i < disc.nx(); ++i) csv += ",x" + std::to_string(i);
      for (Eigen::Index i = 0; i < disc.nu(); ++i) csv += ",u" + std::to_string(i);
      csv += "\n";
      for (std::size_t k = 0; k < sol.x_seq.size(); ++k) {
        csv += std::to_string(k);
        for (Eigen::Index i = 0; i < disc.nx(); ++i) csv += "," + num(sol.x_seq[k](i));
        for (Eigen::Index i = 0; i < disc.nu(); ++i) {
          csv += k < sol.u_seq.size() ? "," + num(sol.u_seq[k](i)) : std::string(",");
        }
        csv += "\n";
      }
      emit(output, csv, out);
      if (!output.empty()) out << "value " << num(sol.value) << "\n";
    }
  } catch (const Error& e) {
    err << "lqdisc: " << one_line(e.what()) << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "lqdisc: internal error: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}

}  // namespace lqdisc::cli
