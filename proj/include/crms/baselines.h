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

// Reference allocators: fixed-quota scaling (SNFC), random search, dominant
// resource fairness (DRF) and an exhaustive grid oracle.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crms/optimizer.h"
#include "crms/system.h"

namespace crms {

// Fixed per-container quota; an empty r_mem means each app's r_max.
struct FixedQuota {
  double r_cpu = 0.0;
  std::optional<double> r_mem;
};

inline const FixedQuota kSnfc1{1.8, 350.0};
inline const FixedQuota kSnfc2{1.0, std::nullopt};

// Every app keeps the fixed quota and picks its count with solve_sp2. The
// budgets are checked afterwards and reported through Allocation::feasible.
// Throws DomainError when the quota lies outside an app's memory bounds and
// InfeasibleError when some app has no stable count within the budgets.
Allocation snfc_plan(const FixedQuota& quota, std::span<const AppProfile> profiles,
                     const ServerSpec& server, const Weights& weights);

struct RandomSearchOptions {
  std::size_t budget = 2000;
  std::uint64_t seed = 0;
  bool parallel = true;
};

struct RandomSearchResult {
  Allocation best;             // valid only when found
  bool found = false;
  std::size_t best_index = 0;  // sample index of `best`
  std::size_t feasible_samples = 0;
  std::size_t unstable_samples = 0;
  std::size_t over_budget_samples = 0;
};

// Sample k visits the apps in a random order; each draws r_cpu log-uniform
// on [0.1, R_cpu], r_mem uniform on [r_min, r_max], then N uniform on
// [1, floor(min(cpu_left / r_cpu, mem_left / r_mem))] where the remaining
// budgets shrink as apps are visited (N = 1 once nothing is left). Draws come
// from a counter-based stream keyed by (seed, k), so the first b samples are
// the same for every budget >= b. The best feasible sample wins; ties go to
// the lower sample index.
RandomSearchResult random_search(std::span<const AppProfile> profiles,
                                 const ServerSpec& server, const Weights& weights,
                                 const RandomSearchOptions& options = {});

// The configurations of sample `index`, as drawn by random_search.
std::vector<ClusterConfig> random_search_sample(std::span<const AppProfile> profiles,
                                                const ServerSpec& server,
                                                std::uint64_t seed, std::size_t index);

// Progressive filling: grant one container at a time to the app with the
// smallest dominant share among those whose next container still fits; ties
// go to the lower index.
std::vector<int> drf_counts(std::span<const Quota> demands, double cpu_total,
                            double mem_total);

struct DrfResult {
  Allocation allocation;
  std::vector<double> dominant_shares;
  std::vector<std::string> unstable_apps;  // rho >= 1 or no container
};

// Demands default to each app's SP1 quotas (r_cpu*, r_max).
std::vector<Quota> default_drf_demands(std::span<const AppProfile> profiles,
                                       const ServerSpec& server, const Weights& weights);
DrfResult drf_plan(std::span<const AppProfile> profiles, std::span<const Quota> demands,
                   const ServerSpec& server, const Weights& weights);

struct AppGrid {
  int n_min = 1;
  int n_max = 1;
  std::vector<double> r_cpu;
  std::vector<double> r_mem;
};

struct GridSpec {
  std::vector<AppGrid> apps;

  // n in [n_min, n_max]; r_cpu = cpu_step, 2 cpu_step, ... <= cpu_max;
  // r_mem = r_min, r_min + mem_step, ... <= r_max, plus r_max itself.
  static GridSpec uniform(std::span<const AppProfile> profiles, int n_min, int n_max,
                          double cpu_step, double cpu_max, double mem_step);
  double cardinality() const;
};

struct GridOptions {
  double max_combinations = 1e7;
  bool parallel = true;
};

// Exact minimum of U over the feasible points of the grid; ties go to the
// lexicographically first point (app 0 slowest; n, then r_cpu, then r_mem).
// Throws InputError when the grid is malformed or larger than
// max_combinations, InfeasibleError when no grid point is feasible.
Allocation brute_force_grid(std::span<const AppProfile> profiles, const ServerSpec& server,
                            const Weights& weights, const GridSpec& grid,
                            const GridOptions& options = {});

// Reference enumeration that evaluates system_utility at every grid point.
Allocation brute_force_grid_reference(std::span<const AppProfile> profiles,
                                      const ServerSpec& server, const Weights& weights,
                                      const GridSpec& grid);

}  // namespace crms
