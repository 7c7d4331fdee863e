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

// Text formats shared by the CLI and the tests.
//
// Scenario file (one `key = value` per line, `#` starts a comment):
//
//   server {
//     cpu_total = 30        # cores
//     mem_total = 10GB      # MB unless suffixed with MB or GB (1 GB = 1024 MB)
//     p_idle = 60           # W
//     p_full = 160          # W
//   }
//   weights {
//     alpha = 1.4
//     beta = 0.2
//   }
//   app {                   # repeated, order is significant
//     name = resnet_v2
//     kappa1 = -500
//     kappa2 = 1.0
//     kappa3 = 1200
//     latency_unit = ms     # optional: s (default) or ms
//     r_min = 200           # MB or suffixed
//     r_max = 400
//     lambda = 8            # requests / s
//     x_mean = 5            # images / request
//   }
//
// Plan CSV: `app,N,r_cpu,r_mem_mb,mu,rho,Ws_s,dP_w,utility_share`, optionally
// followed by a `stable` column for baseline plans.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "crms/system.h"

namespace crms {

inline constexpr const char* kPlanHeader =
    "app,N,r_cpu,r_mem_mb,mu,rho,Ws_s,dP_w,utility_share";

Scenario parse_scenario(std::istream& in, const std::string& source);
Scenario load_scenario(const std::string& path);
void write_scenario(std::ostream& out, const Scenario& scenario);

void write_plan_csv(std::ostream& out, const Allocation& alloc,
                    bool stability_column = false);

struct PlanRow {
  std::string app;
  ClusterConfig config;
};

std::vector<PlanRow> read_plan_csv(std::istream& in, const std::string& source);

// Orders plan rows by the scenario's app order. Throws InputError when the
// plan is empty or does not name exactly the scenario's apps.
std::vector<ClusterConfig> match_plan(const std::vector<PlanRow>& rows,
                                      const Scenario& scenario);

}  // namespace crms
