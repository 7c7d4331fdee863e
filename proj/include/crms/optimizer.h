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

// The allocation pipeline:
//
//   SP1  per-container quotas minimizing F = alpha x d(r, m) + beta dp(r) / lambda
//   SP2  container count minimizing Phi(N) = alpha W_s(N) + beta dP(N) / lambda
//   P1   quotas for fixed counts under the shared CPU and memory budgets
//   CRMS greedy refinement that removes one container at a time while the
//        budget-constrained utility improves.

#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crms/system.h"

namespace crms {

struct Quota {
  double r_cpu = 0.0;  // cores
  double r_mem = 0.0;  // MB
};

struct Sp1Solution {
  double r_cpu = 0.0;
  double r_mem = 0.0;
  double f_value = 0.0;
  double stationarity_residual = 0.0;  // |dF/dr_cpu|, 0 when clipped
  bool clipped = false;
};

// Per-container objective F(r_cpu, r_mem) in seconds-weighted units.
double sp1_objective(const AppProfile& profile, const ServerSpec& server,
                     const Weights& weights, double r_cpu, double r_mem);
double sp1_cpu_derivative(const AppProfile& profile, const ServerSpec& server,
                          const Weights& weights, double r_cpu);

// Memory goes to r_max; the CPU quota is the root of dF/dr_cpu found by
// bisection, clipped to `cpu_cap`. Without a cap and with beta = 0 the
// objective is unbounded (UnboundedError).
Sp1Solution solve_sp1(const AppProfile& profile, const ServerSpec& server,
                      const Weights& weights, std::optional<double> cpu_cap);

// alpha W_s + beta dP / lambda for n containers at fixed quotas; +inf when
// the cluster is unstable.
double phi(int n, const AppProfile& profile, const Quota& quota,
           const ServerSpec& server, const Weights& weights);

struct Sp2Solution {
  int n_star = 0;
  double phi_value = 0.0;
  int lower = 0;
  int upper = 0;
};

// Minimizes phi over [min_stable_servers, floor(min(R_cpu / r_cpu,
// R_mem / r_mem))]. Ranges of at most 12 are scanned; longer ranges use an
// integer ternary search that keeps both probes on ties, then walks to the
// best neighbor. Ties resolve to the smaller count. An empty range throws
// InfeasibleError.
Sp2Solution solve_sp2(const AppProfile& profile, const Quota& quota,
                      const ServerSpec& server, const Weights& weights);

// Reference scan used by tests and benchmarks.
Sp2Solution solve_sp2_exhaustive(const AppProfile& profile, const Quota& quota,
                                 const ServerSpec& server, const Weights& weights);

// SP1 (cap = R_cpu) followed by SP2 for every application, ignoring the
// shared budgets. Allocation::feasible reports whether they happen to hold.
Allocation unconstrained_plan(std::span<const AppProfile> profiles,
                              const ServerSpec& server, const Weights& weights);

struct KktReport {
  double nu_cpu = 0.0;
  double nu_mem = 0.0;
  double cpu_slack = 0.0;  // R_cpu - sum N r_cpu
  double mem_slack = 0.0;  // R_mem - sum N r_mem
  double cpu_complementarity = 0.0;  // |nu_cpu * cpu_slack|
  double mem_complementarity = 0.0;
  std::vector<double> stationarity;  // per app, max of the projected partials
  double residual = 0.0;
};

struct P1Solution {
  std::vector<int> counts;
  std::vector<Quota> quotas;
  double objective = 0.0;
  KktReport kkt;
};

// Minimizes the sum of per-app utilities over the quotas for fixed counts,
// subject to both budgets and r_min <= r_mem <= r_max. Solved through the
// dual: for given prices the problem splits per app, and each app's
// stationarity system reduces to a monotone equation in its offered load.
// Throws InfeasibleError naming the binding constraint ("memory",
// "stability", "cpu" or "cpu+memory") and ConvergenceError when the KKT
// residual stays above `tolerance`.
P1Solution solve_p1(std::span<const AppProfile> profiles, std::span<const int> counts,
                    const ServerSpec& server, const Weights& weights,
                    double tolerance = 1e-6);

// Recomputes the KKT report of `solution` (which may be hand-modified):
// projected stationarity with the solution's multipliers, budget violations,
// negative multipliers and complementary slackness.
KktReport kkt_report(const P1Solution& solution, std::span<const AppProfile> profiles,
                     const ServerSpec& server, const Weights& weights);
double kkt_residual(const P1Solution& solution, std::span<const AppProfile> profiles,
                    const ServerSpec& server, const Weights& weights);

struct CrmsStep {
  int app = -1;           // app whose count was decremented, -1 if none
  double utility = 0.0;   // best candidate utility of the round
  bool accepted = false;
};

struct CrmsTrace {
  std::string start;  // "unconstrained", "p1" or "p1-min-stable"
  double start_utility = 0.0;
  std::vector<CrmsStep> steps;
};

struct CrmsOptions {
  bool parallel = true;  // evaluate a round's candidates with OpenMP
};

struct CrmsResult {
  Allocation allocation;
  CrmsTrace trace;
};

CrmsResult crms_plan(std::span<const AppProfile> profiles, const ServerSpec& server,
                     const Weights& weights, const CrmsOptions& options = {});

// One line per round: `round=<k> app=<name|-> U_p=<value> accepted=<0|1>`.
void write_trace(std::ostream& out, const CrmsTrace& trace,
                 std::span<const AppProfile> profiles);

}  // namespace crms
