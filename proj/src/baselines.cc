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

#include "crms/baselines.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "counter_rng.h"
#include "crms/errors.h"
#include "text_util.h"

namespace crms {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRsCpuMin = 0.1;  // cores

void validate_all(std::span<const AppProfile> profiles, const ServerSpec& server,
                  const Weights& weights) {
  server.validate();
  weights.validate();
  for (const auto& p : profiles) p.validate();
  if (profiles.empty()) throw InputError("no applications");
}

bool within(double usage, double budget) {
  return usage <= budget * (1.0 + kBudgetTolerance);
}

struct Best {
  double value = kInf;
  std::size_t index = std::numeric_limits<std::size_t>::max();

  void offer(double v, std::size_t i) {
    if (v < value || (v == value && i < index)) {
      value = v;
      index = i;
    }
  }
};

}  // namespace

Allocation snfc_plan(const FixedQuota& quota, std::span<const AppProfile> profiles,
                     const ServerSpec& server, const Weights& weights) {
  validate_all(profiles, server, weights);
  if (!(quota.r_cpu > 0.0)) throw DomainError("SNFC CPU quota must be positive");
  std::vector<ClusterConfig> cfgs;
  for (const AppProfile& p : profiles) {
    const double m = quota.r_mem.value_or(p.r_max);
    if (m < p.r_min || m > p.r_max) {
      throw DomainError(p.name + ": fixed memory quota " + text::format_double(m) +
                        " MB outside [" + text::format_double(p.r_min) + ", " +
                        text::format_double(p.r_max) + "]");
    }
    const Sp2Solution n = solve_sp2(p, {quota.r_cpu, m}, server, weights);
    cfgs.push_back({n.n_star, quota.r_cpu, m});
  }
  return system_utility(cfgs, profiles, server, weights);
}

std::vector<ClusterConfig> random_search_sample(std::span<const AppProfile> profiles,
                                                const ServerSpec& server,
                                                std::uint64_t seed, std::size_t index) {
  CounterRng rng(seed, index);
  const double log_lo = std::log(kRsCpuMin);
  const double log_hi = std::log(server.cpu_total);
  std::vector<std::size_t> order(profiles.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(rng.integer(0, i - 1))]);
  }
  double cpu_left = server.cpu_total;
  double mem_left = server.mem_total;
  std::vector<ClusterConfig> cfgs(profiles.size());
  for (std::size_t i : order) {
    const AppProfile& p = profiles[i];
    ClusterConfig& c = cfgs[i];
    c.r_cpu = std::exp(log_lo + (log_hi - log_lo) * rng.uniform());
    c.r_mem = p.r_min + (p.r_max - p.r_min) * rng.uniform();
    const double cap = std::min(cpu_left / c.r_cpu, mem_left / c.r_mem);
    const auto n_max = static_cast<std::int64_t>(std::max(1.0, std::floor(cap)));
    c.n_containers = static_cast<int>(rng.integer(1, n_max));
    cpu_left -= c.n_containers * c.r_cpu;
    mem_left -= c.n_containers * c.r_mem;
  }
  return cfgs;
}

RandomSearchResult random_search(std::span<const AppProfile> profiles,
                                 const ServerSpec& server, const Weights& weights,
                                 const RandomSearchOptions& options) {
  validate_all(profiles, server, weights);
  if (options.budget == 0) throw InputError("random search budget must be >= 1");
  if (server.cpu_total < kRsCpuMin) {
    throw InputError("random search needs R_cpu >= " + text::format_double(kRsCpuMin));
  }
  const auto n = static_cast<std::int64_t>(options.budget);
  std::vector<double> values(options.budget, kInf);
  std::vector<char> status(options.budget, 0);  // 0 feasible, 1 unstable, 2 over budget
#pragma omp parallel for schedule(static) if (options.parallel)
  for (std::int64_t k = 0; k < n; ++k) {
    const auto cfgs = random_search_sample(profiles, server, options.seed,
                                           static_cast<std::size_t>(k));
    const Allocation a = system_utility(cfgs, profiles, server, weights);
    if (a.feasible) {
      values[k] = a.utility;
    } else {
      status[k] = std::isinf(a.utility) ? 1 : 2;
    }
  }
  RandomSearchResult r;
  Best best;
  for (std::size_t k = 0; k < options.budget; ++k) {
    if (status[k] == 0) {
      ++r.feasible_samples;
      best.offer(values[k], k);
    } else if (status[k] == 1) {
      ++r.unstable_samples;
    } else {
      ++r.over_budget_samples;
    }
  }
  if (r.feasible_samples > 0) {
    r.found = true;
    r.best_index = best.index;
    r.best = system_utility(random_search_sample(profiles, server, options.seed, best.index),
                            profiles, server, weights);
  }
  return r;
}

std::vector<int> drf_counts(std::span<const Quota> demands, double cpu_total,
                            double mem_total) {
  for (const Quota& d : demands) {
    if (!(d.r_cpu > 0.0) || !(d.r_mem > 0.0)) throw InputError("DRF demands must be positive");
  }
  std::vector<int> counts(demands.size(), 0);
  double cpu = 0.0, mem = 0.0;
  for (;;) {
    int pick = -1;
    double pick_share = kInf;
    for (std::size_t i = 0; i < demands.size(); ++i) {
      if (!within(cpu + demands[i].r_cpu, cpu_total) ||
          !within(mem + demands[i].r_mem, mem_total)) {
        continue;
      }
      const double share = std::max(counts[i] * demands[i].r_cpu / cpu_total,
                                    counts[i] * demands[i].r_mem / mem_total);
      if (share < pick_share) {
        pick = static_cast<int>(i);
        pick_share = share;
      }
    }
    if (pick < 0) break;
    ++counts[pick];
    cpu += demands[pick].r_cpu;
    mem += demands[pick].r_mem;
  }
  return counts;
}

std::vector<Quota> default_drf_demands(std::span<const AppProfile> profiles,
                                       const ServerSpec& server, const Weights& weights) {
  std::vector<Quota> out;
  for (const AppProfile& p : profiles) {
    const Sp1Solution s = solve_sp1(p, server, weights, server.cpu_total);
    out.push_back({s.r_cpu, s.r_mem});
  }
  return out;
}

DrfResult drf_plan(std::span<const AppProfile> profiles, std::span<const Quota> demands,
                   const ServerSpec& server, const Weights& weights) {
  validate_all(profiles, server, weights);
  if (demands.size() != profiles.size()) {
    throw InputError("DRF needs one demand per application");
  }
  const std::vector<int> counts = drf_counts(demands, server.cpu_total, server.mem_total);
  std::vector<ClusterConfig> cfgs(profiles.size());
  DrfResult r;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    cfgs[i] = {counts[i], demands[i].r_cpu, demands[i].r_mem};
    r.dominant_shares.push_back(std::max(counts[i] * demands[i].r_cpu / server.cpu_total,
                                         counts[i] * demands[i].r_mem / server.mem_total));
  }
  r.allocation = system_utility(cfgs, profiles, server, weights);
  for (const AppOutcome& a : r.allocation.apps) {
    if (!a.stable) r.unstable_apps.push_back(a.name);
  }
  return r;
}

GridSpec GridSpec::uniform(std::span<const AppProfile> profiles, int n_min, int n_max,
                           double cpu_step, double cpu_max, double mem_step) {
  if (!(cpu_step > 0.0) || !(mem_step > 0.0) || n_min < 1 || n_max < n_min) {
    throw InputError("grid needs n_min >= 1, n_max >= n_min and positive steps");
  }
  GridSpec g;
  for (const AppProfile& p : profiles) {
    AppGrid a;
    a.n_min = n_min;
    a.n_max = n_max;
    for (int k = 1; k * cpu_step <= cpu_max * (1.0 + 1e-12); ++k) a.r_cpu.push_back(k * cpu_step);
    for (int k = 0; p.r_min + k * mem_step < p.r_max - 1e-9; ++k) {
      a.r_mem.push_back(p.r_min + k * mem_step);
    }
    a.r_mem.push_back(p.r_max);
    g.apps.push_back(std::move(a));
  }
  return g;
}

double GridSpec::cardinality() const {
  double c = 1.0;
  for (const AppGrid& a : apps) {
    c *= static_cast<double>(a.n_max - a.n_min + 1) * static_cast<double>(a.r_cpu.size()) *
         static_cast<double>(a.r_mem.size());
  }
  return c;
}

namespace {

void check_grid(std::span<const AppProfile> profiles, const GridSpec& grid,
                double max_combinations) {
  if (grid.apps.size() != profiles.size()) {
    throw InputError("grid has " + std::to_string(grid.apps.size()) + " apps, scenario has " +
                     std::to_string(profiles.size()));
  }
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const AppGrid& a = grid.apps[i];
    if (a.n_min < 1 || a.n_max < a.n_min || a.r_cpu.empty() || a.r_mem.empty()) {
      throw InputError(profiles[i].name + ": empty or malformed grid");
    }
    for (double r : a.r_cpu) {
      if (!(r > 0.0)) throw InputError(profiles[i].name + ": grid CPU values must be positive");
    }
    for (double m : a.r_mem) {
      if (m < profiles[i].r_min || m > profiles[i].r_max) {
        throw InputError(profiles[i].name + ": grid memory value " + text::format_double(m) +
                         " outside [r_min, r_max]");
      }
    }
  }
  const double card = grid.cardinality();
  if (card > max_combinations) {
    throw InputError("grid has " + text::format_double(card) +
                     " combinations, above the limit of " +
                     text::format_double(max_combinations));
  }
}

struct GridOption {
  ClusterConfig cfg;
  double share = 0.0;
  double cpu = 0.0;
  double mem = 0.0;
};

}  // namespace

Allocation brute_force_grid(std::span<const AppProfile> profiles, const ServerSpec& server,
                            const Weights& weights, const GridSpec& grid,
                            const GridOptions& options) {
  validate_all(profiles, server, weights);
  check_grid(profiles, grid, options.max_combinations);
  const std::size_t m = profiles.size();
  std::vector<std::vector<GridOption>> opts(m);
  for (std::size_t i = 0; i < m; ++i) {
    const AppGrid& g = grid.apps[i];
    for (int n = g.n_min; n <= g.n_max; ++n) {
      for (double r : g.r_cpu) {
        for (double mem : g.r_mem) {
          GridOption o;
          o.cfg = {n, r, mem};
          o.cpu = n * r;
          o.mem = n * mem;
          if (!within(o.cpu, server.cpu_total) || !within(o.mem, server.mem_total)) continue;
          const ClusterConfig one[] = {o.cfg};
          const Allocation a = system_utility(one, profiles.subspan(i, 1), server, weights);
          if (!a.apps[0].stable) continue;
          o.share = a.apps[0].utility_share;
          opts[i].push_back(o);
        }
      }
    }
    if (opts[i].empty()) {
      throw InfeasibleError("grid", profiles[i].name + ": no stable grid point fits the budgets");
    }
  }
  std::int64_t total = 1;
  for (const auto& o : opts) total *= static_cast<std::int64_t>(o.size());

  Best best;
#pragma omp parallel if (options.parallel)
  {
    Best local;
    std::vector<std::size_t> digit(m);
#pragma omp for schedule(static)
    for (std::int64_t flat = 0; flat < total; ++flat) {
      std::int64_t rest = flat;
      for (std::size_t i = m; i-- > 0;) {
        const auto size = static_cast<std::int64_t>(opts[i].size());
        digit[i] = static_cast<std::size_t>(rest % size);
        rest /= size;
      }
      double cpu = 0.0, mem = 0.0, u = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const GridOption& o = opts[i][digit[i]];
        cpu += o.cpu;
        mem += o.mem;
        u += o.share;
      }
      if (within(cpu, server.cpu_total) && within(mem, server.mem_total)) {
        local.offer(u, static_cast<std::size_t>(flat));
      }
    }
#pragma omp critical
    best.offer(local.value, local.index);
  }
  if (!std::isfinite(best.value)) {
    throw InfeasibleError("grid", "no grid point satisfies the budgets");
  }
  std::vector<ClusterConfig> cfgs(m);
  auto rest = static_cast<std::int64_t>(best.index);
  for (std::size_t i = m; i-- > 0;) {
    const auto size = static_cast<std::int64_t>(opts[i].size());
    cfgs[i] = opts[i][static_cast<std::size_t>(rest % size)].cfg;
    rest /= size;
  }
  return system_utility(cfgs, profiles, server, weights);
}

Allocation brute_force_grid_reference(std::span<const AppProfile> profiles,
                                      const ServerSpec& server, const Weights& weights,
                                      const GridSpec& grid) {
  validate_all(profiles, server, weights);
  check_grid(profiles, grid, std::numeric_limits<double>::infinity());
  const std::size_t m = profiles.size();
  std::vector<ClusterConfig> cfgs(m), best_cfgs;
  double best = kInf;
  const auto visit = [&](auto&& self, std::size_t i) -> void {
    if (i == m) {
      const Allocation a = system_utility(cfgs, profiles, server, weights);
      if (a.feasible && a.utility < best) {
        best = a.utility;
        best_cfgs = cfgs;
      }
      return;
    }
    const AppGrid& g = grid.apps[i];
    for (int n = g.n_min; n <= g.n_max; ++n) {
      for (double r : g.r_cpu) {
        for (double mem : g.r_mem) {
          cfgs[i] = {n, r, mem};
          self(self, i + 1);
        }
      }
    }
  };
  visit(visit, 0);
  if (best_cfgs.empty()) throw InfeasibleError("grid", "no grid point satisfies the budgets");
  return system_utility(best_cfgs, profiles, server, weights);
}

}  // namespace crms
