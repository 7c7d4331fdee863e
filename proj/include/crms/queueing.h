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

// Steady-state M/M/N analytics (Poisson arrivals, exponential service, N
// identical servers, one FCFS queue).
//
// The idle-probability sum is accumulated in log space with the recurrence
// t_{k+1} = t_k * a / (k + 1), a = lambda / mu, so results stay finite for
// hundreds of servers. Every finite metric requires strict stability
// rho = lambda / (N mu) < 1 and throws InstabilityError otherwise.

#pragma once

namespace crms {

struct QueueParams {
  int n_servers = 1;
  double arrival_rate = 0.0;  // requests / s
  double service_rate = 0.0;  // requests / s per server
};

struct QueueMetrics {
  double pi0 = 0.0;  // P(system empty)
  double l_s = 0.0;  // expected requests in system
  double w_s = 0.0;  // mean response time, s
  double rho = 0.0;  // per-server utilization
};

double utilization(const QueueParams& q);
bool is_stable(const QueueParams& q);

double idle_probability(const QueueParams& q);
double expected_in_system(const QueueParams& q);
double mean_response_time(const QueueParams& q);
QueueMetrics analyze(const QueueParams& q);

// mean_response_time, or +inf for an unstable queue.
double mean_response_time_or_inf(const QueueParams& q);

// Smallest N with lambda / (N mu) < 1.
int min_stable_servers(double arrival_rate, double service_rate);

// Expected queue length L_q as a function of the offered load a = lambda/mu
// for fixed N, together with dL_q/da. Requires 0 < a < N.
struct QueueLengthSlope {
  double l_q = 0.0;
  double dl_q_da = 0.0;
};
QueueLengthSlope queue_length_slope(int n_servers, double offered_load);

}  // namespace crms
