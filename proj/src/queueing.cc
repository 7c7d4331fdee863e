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

#include "crms/queueing.h"

#include <cmath>
#include <limits>
#include <string>

#include "crms/errors.h"
#include "text_util.h"

namespace crms {
namespace {

void check_params(const QueueParams& q) {
  if (q.n_servers < 1) throw InputError("queue needs at least one server");
  if (!(q.arrival_rate > 0.0) || !(q.service_rate > 0.0) ||
      !std::isfinite(q.arrival_rate) || !std::isfinite(q.service_rate)) {
    throw InputError("arrival and service rates must be positive and finite");
  }
}

void require_stable(const QueueParams& q) {
  check_params(q);
  const double rho = utilization(q);
  if (!(rho < 1.0)) {
    throw InstabilityError("unstable M/M/" + std::to_string(q.n_servers) +
                           " queue: rho = " + text::format_double(rho) + " >= 1");
  }
}

// Log-space pieces of the stationary distribution for offered load a on N
// servers: log of sum_{k<N} a^k/k!, log a^{N-1}/(N-1)!, log a^N/N!.
struct LogTerms {
  double log_head = 0.0;  // log sum_{k=0}^{N-1} t_k
  double log_t_prev = 0.0;  // log t_{N-1}
  double log_t_n = 0.0;  // log t_N
};

LogTerms log_terms(int n, double a) {
  const double log_a = std::log(a);
  double log_t = 0.0;  // t_0 = 1
  double acc_max = 0.0;
  double acc_sum = 1.0;  // sum of exp(log_t_k - acc_max)
  LogTerms out;
  for (int k = 1; k < n; ++k) {
    log_t += log_a - std::log(static_cast<double>(k));
    if (log_t > acc_max) {
      acc_sum = acc_sum * std::exp(acc_max - log_t) + 1.0;
      acc_max = log_t;
    } else {
      acc_sum += std::exp(log_t - acc_max);
    }
  }
  out.log_t_prev = log_t;
  out.log_head = acc_max + std::log(acc_sum);
  out.log_t_n = log_t + log_a - std::log(static_cast<double>(n));
  return out;
}

double log_add(double x, double y) {
  const double m = std::max(x, y);
  return m + std::log(std::exp(x - m) + std::exp(y - m));
}

struct ErlangPieces {
  double log_pi0 = 0.0;
  double wait_probability = 0.0;  // Erlang C
};

ErlangPieces erlang_pieces(int n, double a) {
  const double rho = a / n;
  const LogTerms t = log_terms(n, a);
  const double log_tail = t.log_t_n - std::log1p(-rho);
  const double log_total = log_add(t.log_head, log_tail);
  return {-log_total, std::exp(log_tail - log_total)};
}

}  // namespace

double utilization(const QueueParams& q) {
  return q.arrival_rate / (static_cast<double>(q.n_servers) * q.service_rate);
}

bool is_stable(const QueueParams& q) {
  return q.n_servers >= 1 && q.arrival_rate > 0.0 && q.service_rate > 0.0 &&
         utilization(q) < 1.0;
}

double idle_probability(const QueueParams& q) {
  require_stable(q);
  const double a = q.arrival_rate / q.service_rate;
  return std::exp(erlang_pieces(q.n_servers, a).log_pi0);
}

double expected_in_system(const QueueParams& q) {
  require_stable(q);
  const double a = q.arrival_rate / q.service_rate;
  const double rho = utilization(q);
  // L_s = t_N rho / (1 - rho)^2 * pi0 + a = C rho / (1 - rho) + a.
  return erlang_pieces(q.n_servers, a).wait_probability * rho / (1.0 - rho) + a;
}

double mean_response_time(const QueueParams& q) {
  return expected_in_system(q) / q.arrival_rate;
}

QueueMetrics analyze(const QueueParams& q) {
  require_stable(q);
  const double a = q.arrival_rate / q.service_rate;
  const double rho = utilization(q);
  const ErlangPieces e = erlang_pieces(q.n_servers, a);
  QueueMetrics m;
  m.rho = rho;
  m.pi0 = std::exp(e.log_pi0);
  m.l_s = e.wait_probability * rho / (1.0 - rho) + a;
  m.w_s = m.l_s / q.arrival_rate;
  return m;
}

double mean_response_time_or_inf(const QueueParams& q) {
  check_params(q);
  if (!(utilization(q) < 1.0)) return std::numeric_limits<double>::infinity();
  return mean_response_time(q);
}

int min_stable_servers(double arrival_rate, double service_rate) {
  if (!(arrival_rate > 0.0) || !(service_rate > 0.0)) {
    throw InputError("arrival and service rates must be positive");
  }
  const double a = arrival_rate / service_rate;
  if (!(a < 1e9)) throw InputError("offered load too large");
  int n = static_cast<int>(std::floor(a)) + 1;
  while (!(arrival_rate < n * service_rate)) ++n;
  while (n > 1 && arrival_rate < (n - 1) * service_rate) --n;
  return n;
}

QueueLengthSlope queue_length_slope(int n, double a) {
  if (n < 1 || !(a > 0.0) || !(a < n)) {
    throw InstabilityError("queue_length_slope needs 0 < a < N (a = " +
                           text::format_double(a) + ", N = " + std::to_string(n) + ")");
  }
  const double rho = a / n;
  const double one_minus = 1.0 - rho;
  const LogTerms t = log_terms(n, a);
  // Scale every term by exp(-m); C and dC/da are ratios and do not depend on m.
  const double log_tail = t.log_t_n - std::log1p(-rho);
  const double m = std::max(t.log_head, log_tail);
  const double head = std::exp(t.log_head - m);
  const double t_n = std::exp(t.log_t_n - m);
  const double t_prev = std::exp(t.log_t_prev - m);
  const double tail = t_n / one_minus;
  const double d_head = head - t_prev;  // sum_{k=1}^{N-1} t_{k-1}
  const double d_tail = t_prev / one_minus + t_n / (n * one_minus * one_minus);
  const double total = head + tail;
  const double c = tail / total;
  const double dc = (d_tail * head - tail * d_head) / (total * total);
  QueueLengthSlope out;
  out.l_q = c * rho / one_minus;
  out.dl_q_da = dc * rho / one_minus + c / (n * one_minus * one_minus);
  return out;
}

}  // namespace crms
