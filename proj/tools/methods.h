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

// Method dispatch and sweep driver shared by the command-line tool and the
// acceptance checks.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crms/baselines.h"
#include "crms/optimizer.h"
#include "crms/system.h"

namespace crms::cli {

enum class Method { kCrms, kSnfc1, kSnfc2, kRandomSearch, kDrf, kBrute };

std::optional<Method> parse_method(const std::string& name);
std::string method_name(Method m);

struct GridFlags {
  int n_min = 1;
  int n_max = 8;
  double cpu_step = 0.25;
  double cpu_max = 4.0;
  double mem_step = 50.0;
  std::optional<std::string> grid_file;
};

struct MethodOptions {
  std::size_t rs_budget = 2000;
  std::uint64_t seed = 0;
  GridFlags grid;
  double max_combinations = 1e7;
  bool parallel = true;
};

struct MethodOutcome {
  std::optional<Allocation> allocation;  // empty when no plan exists
  std::optional<CrmsTrace> trace;        // CRMS only
  bool feasible = false;
  std::string binding;  // why the plan is infeasible; empty when feasible
};

MethodOutcome run_method(Method method, const Scenario& scenario, const MethodOptions& options);

// Grid file: CSV `app,n_min,n_max,r_cpu,r_mem` where the last two columns
// list values separated by `;`. Rows follow the scenario's app order by name.
GridSpec read_grid_csv(std::istream& in, const std::string& source, const Scenario& scenario);
GridSpec grid_for(const Scenario& scenario, const GridFlags& flags);

// `param=value` summary line.
std::string summary_line(Method method, const MethodOutcome& outcome);

enum class SweepParam { kLambda, kXMean, kCpuTotal, kMemTotal, kAlpha, kBeta };

std::optional<SweepParam> parse_sweep_param(const std::string& name);
std::string sweep_param_name(SweepParam p);
bool is_per_app(SweepParam p);

struct SweepAxis {
  SweepParam param = SweepParam::kLambda;
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
  std::string target = "all";  // app name or "all" (per-app parameters only)

  std::vector<double> values() const;  // start, start + step, ... <= stop
  void validate(const Scenario& scenario) const;
};

// Parses `start:stop:step`; a single number is a one-point range.
SweepAxis parse_axis(SweepParam param, const std::string& range, const std::string& target);

Scenario apply_axis(const Scenario& base, const SweepAxis& axis, double value);

inline constexpr const char* kSweepHeader =
    "param,value,inner_param,inner_value,app,N,r_cpu,r_mem_mb,mu,rho,Ws_s,dP_w,"
    "utility_share,U_p,feasible";

struct SweepPoint {
  double value = 0.0;
  std::optional<double> inner_value;
  Scenario scenario;
  MethodOutcome outcome;
};

// Runs every (outer, inner) point with up to `jobs` threads; the result is in
// sweep order regardless of scheduling. Infeasible points are kept.
std::vector<SweepPoint> run_sweep(const Scenario& base, const SweepAxis& outer,
                                  const std::optional<SweepAxis>& inner, Method method,
                                  const MethodOptions& options, int jobs);

void write_sweep_csv(std::ostream& out, const SweepAxis& outer,
                     const std::optional<SweepAxis>& inner,
                     const std::vector<SweepPoint>& points);

}  // namespace crms::cli
