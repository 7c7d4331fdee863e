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

// Discrete-event simulation of the per-app container clusters: Poisson
// arrivals, exponential service with mean x * d(r_cpu, r_mem), and one FCFS
// queue per app feeding its N containers (M/M/N).

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crms/system.h"

namespace crms {

struct SimConfig {
  std::vector<ClusterConfig> configs;  // aligned with profiles
  std::vector<AppProfile> profiles;
  // Requests discarded before measuring; default max(5000, 10 L_s).
  std::optional<std::size_t> warmup_requests;
  std::size_t measured_requests = 100000;
  std::uint64_t seed = 0;
};

struct SimAppReport {
  std::string name;
  double mean_response_time = 0.0;  // s, over measured requests
  double ci_half_width = 0.0;       // 95%, batch means
  double mean_in_system = 0.0;      // time average over the measurement window
  double utilization = 0.0;         // busy server-time / (N * window)
  double effective_arrival_rate = 0.0;
  double little_residual = 0.0;  // |L - lambda_eff W| / L
  double rho = 0.0;              // analytic offered load per server
  bool unstable = false;         // rho >= 1
  std::size_t warmup = 0;
  std::size_t completed = 0;  // measured requests completed
  // Totals at the app's horizon: arrivals = departures + in_system_at_end.
  std::size_t arrivals = 0;
  std::size_t departures = 0;
  std::size_t in_system_at_end = 0;
  double horizon = 0.0;  // s, time the last measured request left
};

struct SimReport {
  std::vector<SimAppReport> apps;
  std::uint64_t seed = 0;

  bool operator==(const SimReport&) const;
};

inline constexpr int kBatchCount = 20;

// Single-threaded run over one global event clock. Each app draws from its
// own counter-based streams keyed by (seed, app index), so results do not
// depend on how events of different apps interleave. Throws InputError when
// measured_requests is 0 or the configs do not match the profiles.
SimReport simulate(const SimConfig& config);

struct AppDeviation {
  std::string name;
  double w_sim = 0.0;
  double w_analytic = 0.0;  // +inf when unstable
  double rel_err = 0.0;     // NaN when not compared
  std::string status;       // "pass", "fail" or "not_compared"
};

struct DeviationReport {
  std::vector<AppDeviation> apps;
  double threshold = 0.05;
  bool passed = true;  // every compared app within threshold
};

DeviationReport compare_to_analytic(const SimReport& report,
                                    const std::vector<ClusterConfig>& configs,
                                    const std::vector<AppProfile>& profiles,
                                    double threshold = 0.05);

inline constexpr const char* kSimHeader =
    "app,W_sim_s,W_ci_s,L_sim,util,completed,unstable,W_analytic_s,rel_err";

// One row per app; appends a status column when a deviation report is given.
void write_sim_csv(std::ostream& out, const SimReport& report,
                   const DeviationReport& deviation, bool with_status);

}  // namespace crms
