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

#include "crms/system.h"

#include <cmath>
#include <limits>

#include "crms/errors.h"
#include "crms/queueing.h"
#include "text_util.h"

namespace crms {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMemTolerance = 1e-9;  // MB

bool memory_in_bounds(const AppProfile& p, double r_mem) {
  return r_mem >= p.r_min - kMemTolerance && r_mem <= p.r_max + kMemTolerance;
}

double per_request_power(const AppProfile& p, const ClusterConfig& cfg,
                         const ServerSpec& server) {
  return cluster_power(cfg, server) / p.arrival_rate;
}

}  // namespace

double seconds_per_unit(LatencyUnit unit) {
  return unit == LatencyUnit::kMilliseconds ? 1e-3 : 1.0;
}

void AppProfile::validate() const {
  if (name.empty()) throw InputError("application name is empty");
  validate_params(ModelId::kM1, latency);
  if (!(r_min > 0.0) || !(r_min <= r_max) || !std::isfinite(r_max)) {
    throw InputError(name + ": memory bounds need 0 < r_min <= r_max");
  }
  if (!(arrival_rate > 0.0) || !std::isfinite(arrival_rate)) {
    throw InputError(name + ": arrival rate must be positive");
  }
  if (!(mean_images > 0.0) || !std::isfinite(mean_images)) {
    throw InputError(name + ": mean images per request must be positive");
  }
}

double AppProfile::image_delay_s(double r_cpu, double r_mem) const {
  return seconds_per_unit(unit) *
         eval_latency_unchecked(ModelId::kM1, latency, r_cpu, r_mem);
}

void ServerSpec::validate() const {
  if (!(cpu_total > 0.0) || !(mem_total > 0.0)) {
    throw InputError("server budgets must be positive");
  }
  if (!(p_idle >= 0.0) || !(p_full > p_idle)) {
    throw InputError("server power points need p_full > p_idle >= 0");
  }
}

void Weights::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("alpha must be > 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InputError("beta must be >= 0");
}

void Scenario::validate() const {
  server.validate();
  weights.validate();
  for (std::size_t i = 0; i < apps.size(); ++i) {
    apps[i].validate();
    for (std::size_t j = 0; j < i; ++j) {
      if (apps[j].name == apps[i].name) {
        throw InputError("duplicate application name '" + apps[i].name + "'");
      }
    }
  }
}

int Scenario::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < apps.size(); ++i) {
    if (apps[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

double Allocation::delay_term() const {
  double sum = 0.0;
  for (const auto& a : apps) sum += a.w_s;
  return sum;
}

double Allocation::power_term() const {
  double sum = 0.0;
  for (const auto& a : apps) {
    sum += a.delta_power / a.arrival_rate;
  }
  return sum;
}

std::vector<ClusterConfig> Allocation::configs() const {
  std::vector<ClusterConfig> out;
  out.reserve(apps.size());
  for (const auto& a : apps) out.push_back(a.config);
  return out;
}

double cpu_fraction(const ClusterConfig& cfg, const ServerSpec& server) {
  return cfg.n_containers * cfg.r_cpu / server.cpu_total;
}

double cluster_power(const ClusterConfig& cfg, const ServerSpec& server) {
  return server.dynamic_power() * cpu_fraction(cfg, server);
}

double service_rate(const AppProfile& profile, double r_cpu, double r_mem) {
  if (!(r_cpu > 0.0)) {
    throw DomainError(profile.name + ": CPU quota must be positive");
  }
  if (!memory_in_bounds(profile, r_mem)) {
    throw DomainError(profile.name + ": memory " + text::format_double(r_mem) +
                      " MB outside [" + text::format_double(profile.r_min) + ", " +
                      text::format_double(profile.r_max) + "]");
  }
  return 1.0 / (profile.mean_images * profile.image_delay_s(r_cpu, r_mem));
}

double app_utility(const AppProfile& profile, const ClusterConfig& cfg,
                   const ServerSpec& server, const Weights& weights) {
  if (cfg.n_containers < 1 || !(cfg.r_cpu > 0.0)) return kInf;
  const double mu = 1.0 / (profile.mean_images * profile.image_delay_s(cfg.r_cpu, cfg.r_mem));
  const QueueParams q{cfg.n_containers, profile.arrival_rate, mu};
  if (!is_stable(q)) return kInf;
  return weights.alpha * mean_response_time(q) +
         weights.beta * per_request_power(profile, cfg, server);
}

Allocation system_utility(std::span<const ClusterConfig> configs,
                          std::span<const AppProfile> profiles,
                          const ServerSpec& server, const Weights& weights) {
  if (configs.size() != profiles.size()) {
    throw InputError("plan has " + std::to_string(configs.size()) +
                     " entries for " + std::to_string(profiles.size()) + " apps");
  }
  Allocation alloc;
  alloc.apps.reserve(configs.size());
  bool all_stable = true;
  double total = 0.0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const AppProfile& p = profiles[i];
    const ClusterConfig& cfg = configs[i];
    AppOutcome out;
    out.name = p.name;
    out.config = cfg;
    out.arrival_rate = p.arrival_rate;
    out.mu = service_rate(p, cfg.r_cpu, cfg.r_mem);
    out.delta_power = cfg.n_containers >= 1 ? cluster_power(cfg, server) : 0.0;
    if (cfg.n_containers >= 1) {
      const QueueParams q{cfg.n_containers, p.arrival_rate, out.mu};
      out.rho = utilization(q);
      out.stable = is_stable(q);
      out.w_s = out.stable ? mean_response_time(q) : kInf;
    } else {
      out.rho = kInf;
      out.stable = false;
      out.w_s = kInf;
    }
    out.utility_share = weights.alpha * out.w_s +
                        weights.beta * out.delta_power / p.arrival_rate;
    all_stable = all_stable && out.stable;
    total += out.utility_share;
    alloc.apps.push_back(std::move(out));
  }
  alloc.utility = all_stable ? total : kInf;
  alloc.feasible = all_stable && check_feasible(configs, profiles, server).feasible;
  return alloc;
}

Allocation system_utility(std::span<const ClusterConfig> configs,
                          const Scenario& scenario) {
  return system_utility(configs, scenario.apps, scenario.server, scenario.weights);
}

FeasibilityReport check_feasible(std::span<const ClusterConfig> configs,
                                 std::span<const AppProfile> profiles,
                                 const ServerSpec& server) {
  if (configs.size() != profiles.size()) {
    throw InputError("plan/profile count mismatch");
  }
  FeasibilityReport r;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const ClusterConfig& cfg = configs[i];
    const AppProfile& p = profiles[i];
    r.cpu_usage += cfg.n_containers * cfg.r_cpu;
    r.mem_usage += cfg.n_containers * cfg.r_mem;
    AppFeasibility app;
    app.name = p.name;
    app.memory_ok = memory_in_bounds(p, cfg.r_mem);
    if (!app.memory_ok) {
      r.violations.push_back(p.name + ": memory bound");
    }
    if (cfg.n_containers >= 1 && cfg.r_cpu > 0.0 && cfg.r_mem > 0.0) {
      const double mu = 1.0 / (p.mean_images * p.image_delay_s(cfg.r_cpu, cfg.r_mem));
      const QueueParams q{cfg.n_containers, p.arrival_rate, mu};
      app.rho = utilization(q);
      app.stable = is_stable(q);
    } else {
      app.rho = kInf;
      app.stable = false;
    }
    if (!app.stable) r.violations.push_back(p.name + ": unstable (rho >= 1)");
    r.apps.push_back(std::move(app));
  }
  r.cpu_slack = server.cpu_total - r.cpu_usage;
  r.mem_slack = server.mem_total - r.mem_usage;
  if (r.cpu_usage > server.cpu_total * (1.0 + kBudgetTolerance)) {
    r.violations.insert(r.violations.begin(), "cpu budget");
  }
  if (r.mem_usage > server.mem_total * (1.0 + kBudgetTolerance)) {
    r.violations.insert(r.violations.begin(), "memory budget");
  }
  r.feasible = r.violations.empty();
  return r;
}

}  // namespace crms
