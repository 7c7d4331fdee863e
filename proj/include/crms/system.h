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

// Scenario data model for one edge server: application profiles, the server's
// budgets and power points, the delay/energy weights, per-application
// container clusters, and the composite utility
//
//   U = sum_i alpha * W_s(N_i, lambda_i, mu_i) + beta * dP_i / lambda_i
//
// with mu_i = 1 / (x_i * d_i) and dP_i = (P_full - P_idle) N_i r_cpu_i / R_cpu.
// Idle power is a constant offset and is not part of U.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "crms/model_fit.h"

namespace crms {

// Time unit the latency coefficients were fitted in. Model output is
// converted to seconds before it enters the queueing model.
enum class LatencyUnit { kSeconds, kMilliseconds };

double seconds_per_unit(LatencyUnit unit);

struct AppProfile {
  std::string name;
  LatencyParams latency;  // M1 coefficients
  LatencyUnit unit = LatencyUnit::kSeconds;
  double r_min = 0.0;         // MB, OOM floor
  double r_max = 0.0;         // MB, saturation point
  double arrival_rate = 0.0;  // requests / s
  double mean_images = 0.0;   // images / request

  void validate() const;
  // Per-image delay in seconds; no argument checks.
  double image_delay_s(double r_cpu, double r_mem) const;
};

struct ServerSpec {
  double cpu_total = 0.0;  // cores
  double mem_total = 0.0;  // MB
  double p_idle = 0.0;     // W
  double p_full = 0.0;     // W

  void validate() const;
  double dynamic_power() const { return p_full - p_idle; }
};

struct Weights {
  double alpha = 1.0;
  double beta = 0.0;

  void validate() const;
};

struct Scenario {
  ServerSpec server;
  Weights weights;
  std::vector<AppProfile> apps;

  void validate() const;
  int index_of(const std::string& name) const;  // -1 if absent
};

struct ClusterConfig {
  int n_containers = 1;
  double r_cpu = 0.0;  // cores per container
  double r_mem = 0.0;  // MB per container

  bool operator==(const ClusterConfig&) const = default;
};

struct AppOutcome {
  std::string name;
  ClusterConfig config;
  double arrival_rate = 0.0;  // requests / s
  double mu = 0.0;
  double rho = 0.0;
  double w_s = 0.0;            // s, +inf when unstable
  double delta_power = 0.0;    // W
  double utility_share = 0.0;  // alpha W_s + beta dP / lambda
  bool stable = false;
};

struct Allocation {
  std::vector<AppOutcome> apps;  // aligned with the scenario's app order
  double utility = 0.0;          // +inf when any app is unstable
  bool feasible = false;         // budgets (CPU, memory) hold and all stable

  double delay_term() const;  // sum of W_s
  double power_term() const;  // sum of dP / lambda
  std::vector<ClusterConfig> configs() const;
};

// Relative slack allowed on the budget constraints.
inline constexpr double kBudgetTolerance = 1e-9;

// N r_cpu / R_cpu.
double cpu_fraction(const ClusterConfig& cfg, const ServerSpec& server);
// (P_full - P_idle) * cpu_fraction.
double cluster_power(const ClusterConfig& cfg, const ServerSpec& server);

// 1 / (x * d). Throws DomainError when r_cpu <= 0 or r_mem lies outside
// [r_min, r_max].
double service_rate(const AppProfile& profile, double r_cpu, double r_mem);

// Per-application utility alpha W_s + beta dP / lambda; +inf when unstable.
// No range checks.
double app_utility(const AppProfile& profile, const ClusterConfig& cfg,
                   const ServerSpec& server, const Weights& weights);

// Evaluates U for a full plan. Memory outside [r_min, r_max] throws
// DomainError; unstable apps make U = +inf and feasible = false.
Allocation system_utility(std::span<const ClusterConfig> configs,
                          std::span<const AppProfile> profiles,
                          const ServerSpec& server, const Weights& weights);
Allocation system_utility(std::span<const ClusterConfig> configs,
                          const Scenario& scenario);

struct AppFeasibility {
  std::string name;
  bool memory_ok = true;
  double rho = 0.0;
  bool stable = false;
};

struct FeasibilityReport {
  double cpu_usage = 0.0;
  double cpu_slack = 0.0;  // budget - usage
  double mem_usage = 0.0;
  double mem_slack = 0.0;
  std::vector<AppFeasibility> apps;
  std::vector<std::string> violations;
  bool feasible = true;
};

FeasibilityReport check_feasible(std::span<const ClusterConfig> configs,
                                 std::span<const AppProfile> profiles,
                                 const ServerSpec& server);

}  // namespace crms
