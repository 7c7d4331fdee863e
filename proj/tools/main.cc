// Copyright 2026 The CRMS Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// crms: command-line front end.
//
// Exit codes: 0 success, 1 internal error, 2 usage or parse error,
// 3 infeasible plan, 4 validation threshold exceeded, 5 invalid input.

#include <omp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "crms/errors.h"
#include "crms/model_fit.h"
#include "crms/scenario_io.h"
#include "crms/simulator.h"
#include "methods.h"
#include "text_util.h"

namespace fs = std::filesystem;
using namespace crms;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitParse = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitValidation = 4;
constexpr int kExitInput = 5;

constexpr const char* kVersion =
    "crms 1.0.0 (scenario 1, plan-csv 1, sim-csv 1, sweep-csv 1, samples-csv 1, fit crms-fit/1)";

struct Common {
  std::string scenario;
  std::string out = ".";
  std::uint64_t seed = 0;
  int jobs = 0;
};

std::ofstream open_out(const Common& c, const std::string& name) {
  fs::create_directories(c.out);
  const fs::path path = fs::path(c.out) / name;
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

std::vector<double> grid_values(const std::string& range) {
  const cli::SweepAxis axis = cli::parse_axis(cli::SweepParam::kLambda, range, "all");
  if (!(axis.step > 0.0) || axis.start > axis.stop) throw InputError("bad grid '" + range + "'");
  return axis.values();
}

double latency_scale(const std::string& unit) { return unit == "ms" ? 1e-3 : 1.0; }

struct FitArgs {
  std::string samples;
  std::string model = "all";
  std::string unit = "s";
  std::string init;
};

int run_fit(const Common& c, const FitArgs& a) {
  std::ifstream in(a.samples);
  if (!in) throw InputError("cannot open " + a.samples);
  std::vector<LatencySample> samples = read_samples_csv(in, a.samples);
  // Samples are stored in seconds; fit in the requested latency unit.
  for (LatencySample& s : samples) s.latency /= latency_scale(a.unit);

  std::vector<FitResult> fits;
  if (a.model == "all") {
    fits = rank_models(samples);
  } else {
    const auto model = parse_model(a.model);
    if (!model) throw InputError("unknown model '" + a.model + "'");
    std::optional<LatencyParams> guess;
    if (!a.init.empty()) {
      std::ifstream init(a.init);
      if (!init) throw InputError("cannot open " + a.init);
      const FitResult prior = read_fit_report(init, a.init);
      if (prior.model != *model) throw InputError("--init holds a different model");
      guess = prior.params;
    }
    fits.push_back(fit_model(samples, *model, guess));
  }

  std::ofstream diag = open_out(c, "diagnostics.csv");
  diag << "model,index,r_cpu,r_mem_mb,observed,predicted,residual,standardized,qq_sample,"
          "qq_theoretical\n";
  for (const FitResult& f : fits) {
    std::ofstream report = open_out(c, "fit_" + std::string(model_name(f.model)) + ".txt");
    write_fit_report(report, f, samples.size());
    const ResidualReport r = residual_diagnostics(f, samples);
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const double observed = samples[k].latency;
      diag << model_name(f.model) << ',' << k << ',' << text::format_double(samples[k].r_cpu)
           << ',' << text::format_double(samples[k].r_mem) << ','
           << text::format_double(observed) << ','
           << text::format_double(observed - r.residuals[k]) << ','
           << text::format_double(r.residuals[k]) << ','
           << text::format_double(r.standardized[k]) << ','
           << text::format_double(r.qq[k].sample) << ','
           << text::format_double(r.qq[k].theoretical) << '\n';
    }
  }
  if (a.model == "all") {
    std::ofstream ranking = open_out(c, "ranking.csv");
    ranking << "rank,model,rmse,r_squared,adj_r_squared,converged\n";
    for (std::size_t k = 0; k < fits.size(); ++k) {
      ranking << k + 1 << ',' << model_name(fits[k].model) << ','
              << text::format_double(fits[k].rmse) << ','
              << text::format_double(fits[k].r_squared) << ','
              << text::format_double(fits[k].adj_r_squared) << ','
              << (fits[k].converged ? "true" : "false") << '\n';
    }
  }
  for (const FitResult& f : fits) {
    std::cout << model_name(f.model) << " rmse=" << text::format_double(f.rmse)
              << " r2=" << text::format_double(f.r_squared)
              << " converged=" << (f.converged ? "true" : "false") << '\n';
  }
  return kExitOk;
}

struct SynthArgs {
  std::string model = "M1";
  std::vector<double> kappa;
  std::string unit = "s";
  std::string cpu_grid = "0.5:4:0.5";
  std::string mem_grid = "200:400:25";
  double noise = 0.02;
};

int run_synth(const Common& c, const SynthArgs& a) {
  const auto model = parse_model(a.model);
  if (!model) throw InputError("unknown model '" + a.model + "'");
  if (static_cast<int>(a.kappa.size()) != param_count(*model)) {
    throw InputError(a.model + " needs " + std::to_string(param_count(*model)) + " coefficients");
  }
  LatencyParams p;
  for (std::size_t i = 0; i < a.kappa.size(); ++i) p[static_cast<int>(i)] = a.kappa[i];
  const auto cpu = grid_values(a.cpu_grid);
  const auto mem = grid_values(a.mem_grid);
  std::vector<LatencySample> samples =
      generate_synthetic_profile(p, *model, cpu, mem, a.noise, c.seed);
  for (LatencySample& s : samples) s.latency *= latency_scale(a.unit);
  std::ofstream out = open_out(c, "samples.csv");
  write_samples_csv(out, samples);
  std::cout << "samples=" << samples.size() << '\n';
  return kExitOk;
}

struct OptimizeArgs {
  std::string method = "crms";
  cli::MethodOptions options;
};

int run_optimize(const Common& c, OptimizeArgs a) {
  const Scenario s = load_scenario(c.scenario);
  const auto method = cli::parse_method(a.method);
  if (!method) throw InputError("unknown method '" + a.method + "'");
  a.options.seed = c.seed;
  const cli::MethodOutcome o = cli::run_method(*method, s, a.options);
  const std::string summary = cli::summary_line(*method, o);
  if (o.allocation) {
    std::ofstream plan = open_out(c, "plan.csv");
    write_plan_csv(plan, *o.allocation, *method != cli::Method::kCrms);
  }
  if (o.trace) {
    std::ofstream trace = open_out(c, "trace.txt");
    write_trace(trace, *o.trace, s.apps);
  }
  open_out(c, "summary.txt") << summary << '\n';
  std::cout << summary << '\n';
  return o.feasible ? kExitOk : kExitInfeasible;
}

struct SimArgs {
  std::string plan;
  std::size_t requests = 100000;
  long warmup = -1;
  double threshold = 0.05;
};

int run_simulation(const Common& c, const SimArgs& a, bool validate) {
  const Scenario s = load_scenario(c.scenario);
  std::ifstream in(a.plan);
  if (!in) throw InputError("cannot open " + a.plan);
  SimConfig cfg;
  cfg.configs = match_plan(read_plan_csv(in, a.plan), s);
  cfg.profiles = s.apps;
  cfg.measured_requests = a.requests;
  if (a.warmup >= 0) cfg.warmup_requests = static_cast<std::size_t>(a.warmup);
  cfg.seed = c.seed;
  const SimReport report = simulate(cfg);
  const DeviationReport dev = compare_to_analytic(report, cfg.configs, cfg.profiles, a.threshold);
  std::ofstream out = open_out(c, validate ? "validate.csv" : "sim.csv");
  write_sim_csv(out, report, dev, validate);
  for (const AppDeviation& d : dev.apps) {
    std::cout << d.name << " W_sim=" << text::format_double(d.w_sim)
              << " W_analytic=" << text::format_double(d.w_analytic);
    if (validate) std::cout << " status=" << d.status;
    std::cout << '\n';
    if (d.status == "not_compared") std::cerr << d.name << ": unstable (rho >= 1)\n";
  }
  if (!validate) return kExitOk;
  return dev.passed ? kExitOk : kExitValidation;
}

struct SweepArgs {
  std::string method = "crms";
  std::string param, range, app = "all";
  std::string inner_param, inner_range, inner_app = "all";
  cli::MethodOptions options;
};

int run_sweep_cmd(const Common& c, SweepArgs a) {
  const Scenario s = load_scenario(c.scenario);
  const auto method = cli::parse_method(a.method);
  if (!method) throw InputError("unknown method '" + a.method + "'");
  const auto param = cli::parse_sweep_param(a.param);
  if (!param) throw InputError("unknown sweep parameter '" + a.param + "'");
  const cli::SweepAxis outer = cli::parse_axis(*param, a.range, a.app);
  std::optional<cli::SweepAxis> inner;
  if (!a.inner_param.empty()) {
    const auto ip = cli::parse_sweep_param(a.inner_param);
    if (!ip) throw InputError("unknown sweep parameter '" + a.inner_param + "'");
    if (a.inner_range.empty()) throw InputError("--inner-param needs --inner-range");
    inner = cli::parse_axis(*ip, a.inner_range, a.inner_app);
  }
  a.options.seed = c.seed;
  const int jobs = c.jobs > 0 ? c.jobs : omp_get_max_threads();
  const auto points = cli::run_sweep(s, outer, inner, *method, a.options, jobs);
  std::ofstream out = open_out(c, "sweep.csv");
  cli::write_sweep_csv(out, outer, inner, points);
  std::size_t infeasible = 0;
  for (const auto& p : points) infeasible += p.outcome.feasible ? 0 : 1;
  std::cout << "points=" << points.size() << " infeasible=" << infeasible << '\n';
  return kExitOk;
}

void add_common(CLI::App* cmd, Common& c, bool scenario) {
  if (scenario) cmd->add_option("--scenario", c.scenario, "Scenario file")->required();
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  cmd->add_option("--jobs", c.jobs, "Worker threads (0: OpenMP default)")->check(CLI::NonNegativeNumber);
}

void add_method_options(CLI::App* cmd, std::string& method, cli::MethodOptions& o) {
  cmd->add_option("--method", method, "crms, snfc1, snfc2, rs, drf or brute")
      ->capture_default_str();
  cmd->add_option("--budget", o.rs_budget, "Random-search samples")->capture_default_str();
  cmd->add_option("--grid-n-min", o.grid.n_min)->capture_default_str();
  cmd->add_option("--grid-n-max", o.grid.n_max)->capture_default_str();
  cmd->add_option("--grid-cpu-step", o.grid.cpu_step)->capture_default_str();
  cmd->add_option("--grid-cpu-max", o.grid.cpu_max)->capture_default_str();
  cmd->add_option("--grid-mem-step", o.grid.mem_step)->capture_default_str();
  cmd->add_option("--grid-file", o.grid.grid_file, "Explicit grid CSV");
  cmd->add_option("--grid-limit", o.max_combinations, "Refuse larger grids")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Container resource management for multi-app inference servers"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common common;
  FitArgs fit;
  SynthArgs synth;
  OptimizeArgs optimize;
  SimArgs sim;
  SweepArgs sweep;

  auto* fit_cmd = app.add_subcommand("fit", "Fit latency models to measurements");
  add_common(fit_cmd, common, false);
  fit_cmd->add_option("--samples", fit.samples, "Measurement CSV")->required();
  fit_cmd->add_option("--model", fit.model, "M1..M5 or all")->capture_default_str();
  fit_cmd->add_option("--latency-unit", fit.unit, "Unit of the fitted model")
      ->check(CLI::IsMember({"s", "ms"}))->capture_default_str();
  fit_cmd->add_option("--init", fit.init, "Fit report used as the initial guess");

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic measurement CSV");
  add_common(synth_cmd, common, false);
  synth_cmd->add_option("--model", synth.model)->capture_default_str();
  synth_cmd->add_option("--kappa", synth.kappa, "Coefficients")->required()->delimiter(',');
  synth_cmd->add_option("--latency-unit", synth.unit, "Unit of the coefficients")
      ->check(CLI::IsMember({"s", "ms"}))->capture_default_str();
  synth_cmd->add_option("--cpu-grid", synth.cpu_grid, "start:stop:step")->capture_default_str();
  synth_cmd->add_option("--mem-grid", synth.mem_grid, "start:stop:step (MB)")->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "Relative noise")->capture_default_str();

  auto* opt_cmd = app.add_subcommand("optimize", "Plan an allocation");
  add_common(opt_cmd, common, true);
  add_method_options(opt_cmd, optimize.method, optimize.options);

  auto* sim_cmd = app.add_subcommand("simulate", "Simulate a plan");
  auto* val_cmd = app.add_subcommand("validate", "Simulate a plan and compare with the analytic delay");
  for (auto* cmd : {sim_cmd, val_cmd}) {
    add_common(cmd, common, true);
    cmd->add_option("--plan", sim.plan, "Plan CSV")->required();
    cmd->add_option("--requests", sim.requests, "Measured requests per app")->capture_default_str();
    cmd->add_option("--warmup", sim.warmup, "Warm-up requests (default max(5000, 10 L_s))");
  }
  val_cmd->add_option("--threshold", sim.threshold, "Relative error limit")->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "Re-optimize over a parameter range");
  add_common(sweep_cmd, common, true);
  add_method_options(sweep_cmd, sweep.method, sweep.options);
  sweep_cmd->add_option("--param", sweep.param, "lambda, x_mean, cpu_total, mem_total, alpha, beta")
      ->required();
  sweep_cmd->add_option("--range", sweep.range, "start:stop:step")->required();
  sweep_cmd->add_option("--app", sweep.app, "Target app or all")->capture_default_str();
  sweep_cmd->add_option("--inner-param", sweep.inner_param, "Nested sweep parameter");
  sweep_cmd->add_option("--inner-range", sweep.inner_range, "start:stop:step");
  sweep_cmd->add_option("--inner-app", sweep.inner_app)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  if (common.jobs > 0) omp_set_num_threads(common.jobs);
  try {
    if (*fit_cmd) return run_fit(common, fit);
    if (*synth_cmd) return run_synth(common, synth);
    if (*opt_cmd) return run_optimize(common, optimize);
    if (*sim_cmd) return run_simulation(common, sim, false);
    if (*val_cmd) return run_simulation(common, sim, true);
    if (*sweep_cmd) return run_sweep_cmd(common, sweep);
  } catch (const crms::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible (" << e.binding() << "): " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const crms::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
