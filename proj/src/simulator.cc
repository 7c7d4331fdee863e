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

#include "crms/simulator.h"

#include <boost/math/distributions/students_t.hpp>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <queue>

#include "counter_rng.h"
#include "crms/errors.h"
#include "crms/queueing.h"
#include "text_util.h"

namespace crms {
namespace {

enum class EventKind { kArrival, kDeparture };

struct Event {
  double time;
  std::uint64_t seq;  // insertion order breaks time ties
  std::size_t app;
  EventKind kind;
  std::size_t request;

  bool operator>(const Event& o) const {
    return time != o.time ? time > o.time : seq > o.seq;
  }
};

struct AppState {
  int servers = 1;
  double service_mean = 0.0;
  double arrival_mean = 0.0;
  std::size_t warmup = 0;
  std::size_t measured = 0;
  CounterRng arrivals_rng;
  CounterRng service_rng;

  std::deque<std::size_t> queue;
  int busy = 0;
  std::vector<double> arrival_time;  // by request index
  std::vector<double> response;      // measured requests, by offset
  std::size_t completed = 0;
  std::size_t departures = 0;
  bool done = false;

  // Integrals over the window [window_start, window_end].
  double window_start = std::numeric_limits<double>::quiet_NaN();
  double window_end = std::numeric_limits<double>::quiet_NaN();
  double last_change = 0.0;
  double area_in_system = 0.0;
  double area_busy = 0.0;
  double horizon = 0.0;

  AppState(std::uint64_t seed, std::size_t index)
      : arrivals_rng(seed, index, 0), service_rng(seed, index, 1) {}

  std::size_t in_system() const { return queue.size() + static_cast<std::size_t>(busy); }

  // Accumulates the window integrals up to time t.
  void advance(double t) {
    if (std::isnan(window_start)) return;
    const double lo = std::max(last_change, window_start);
    const double hi = std::isnan(window_end) ? t : std::min(t, window_end);
    if (hi > lo) {
      area_in_system += static_cast<double>(in_system()) * (hi - lo);
      area_busy += busy * (hi - lo);
    }
    last_change = t;
  }
};

double batch_means_half_width(const std::vector<double>& values) {
  const std::size_t n = values.size();
  const std::size_t batches = std::min<std::size_t>(kBatchCount, n);
  if (batches < 2) return std::numeric_limits<double>::infinity();
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t lo = b * n / batches, hi = (b + 1) * n / batches;
    for (std::size_t k = lo; k < hi; ++k) means[b] += values[k];
    means[b] /= static_cast<double>(hi - lo);
  }
  double mean = 0.0;
  for (double m : means) mean += m;
  mean /= static_cast<double>(batches);
  double ss = 0.0;
  for (double m : means) ss += (m - mean) * (m - mean);
  const double sd = std::sqrt(ss / static_cast<double>(batches - 1));
  const boost::math::students_t t(static_cast<double>(batches - 1));
  return boost::math::quantile(t, 0.975) * sd / std::sqrt(static_cast<double>(batches));
}

}  // namespace

bool SimReport::operator==(const SimReport& o) const {
  if (seed != o.seed || apps.size() != o.apps.size()) return false;
  for (std::size_t i = 0; i < apps.size(); ++i) {
    const SimAppReport& a = apps[i];
    const SimAppReport& b = o.apps[i];
    if (a.name != b.name || a.mean_response_time != b.mean_response_time ||
        a.ci_half_width != b.ci_half_width || a.mean_in_system != b.mean_in_system ||
        a.utilization != b.utilization || a.completed != b.completed ||
        a.arrivals != b.arrivals || a.departures != b.departures || a.horizon != b.horizon ||
        a.unstable != b.unstable) {
      return false;
    }
  }
  return true;
}

SimReport simulate(const SimConfig& config) {
  if (config.measured_requests == 0) throw InputError("measured_requests must be at least 1");
  if (config.configs.size() != config.profiles.size()) {
    throw InputError("simulation needs one config per app");
  }
  const std::size_t m = config.profiles.size();
  std::vector<AppState> apps;
  apps.reserve(m);
  SimReport report;
  report.seed = config.seed;
  report.apps.resize(m);

  std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
  std::uint64_t seq = 0;

  for (std::size_t i = 0; i < m; ++i) {
    const AppProfile& p = config.profiles[i];
    const ClusterConfig& c = config.configs[i];
    if (c.n_containers < 1) throw InputError(p.name + ": needs at least one container");
    const double mu = service_rate(p, c.r_cpu, c.r_mem);
    const QueueParams q{c.n_containers, p.arrival_rate, mu};
    SimAppReport& r = report.apps[i];
    r.name = p.name;
    r.rho = utilization(q);
    r.unstable = !is_stable(q);
    std::size_t warmup = 5000;
    if (config.warmup_requests) {
      warmup = *config.warmup_requests;
    } else if (!r.unstable) {
      warmup = std::max<std::size_t>(
          warmup, static_cast<std::size_t>(std::ceil(10.0 * expected_in_system(q))));
    }
    r.warmup = warmup;

    AppState& s = apps.emplace_back(config.seed, i);
    s.servers = c.n_containers;
    s.service_mean = 1.0 / mu;
    s.arrival_mean = 1.0 / p.arrival_rate;
    s.warmup = warmup;
    s.measured = config.measured_requests;
    s.response.assign(s.measured, 0.0);
    s.arrival_time.reserve(warmup + s.measured + 1);
    events.push({s.arrivals_rng.exponential(s.arrival_mean), seq++, i, EventKind::kArrival, 0});
  }

  std::size_t remaining = m;
  while (remaining > 0) {
    const Event e = events.top();
    events.pop();
    AppState& s = apps[e.app];
    if (s.done) continue;
    s.advance(e.time);

    if (e.kind == EventKind::kArrival) {
      const std::size_t k = s.arrival_time.size();
      s.arrival_time.push_back(e.time);
      if (k == s.warmup) s.window_start = e.time;
      if (k == s.warmup + s.measured) s.window_end = e.time;
      if (s.busy < s.servers) {
        ++s.busy;
        events.push({e.time + s.service_rng.exponential(s.service_mean), seq++, e.app,
                     EventKind::kDeparture, k});
      } else {
        s.queue.push_back(k);
      }
      events.push({e.time + s.arrivals_rng.exponential(s.arrival_mean), seq++, e.app,
                   EventKind::kArrival, 0});
    } else {
      ++s.departures;
      const std::size_t k = e.request;
      if (k >= s.warmup && k < s.warmup + s.measured) {
        s.response[k - s.warmup] = e.time - s.arrival_time[k];
        ++s.completed;
      }
      if (s.queue.empty()) {
        --s.busy;
      } else {
        const std::size_t next = s.queue.front();
        s.queue.pop_front();
        events.push({e.time + s.service_rng.exponential(s.service_mean), seq++, e.app,
                     EventKind::kDeparture, next});
      }
      // The window closes at the arrival of request warmup + measured, so
      // the app runs until that arrival has happened and every measured
      // request has left.
      if (s.completed == s.measured && !std::isnan(s.window_end)) {
        s.done = true;
        s.horizon = e.time;
        --remaining;
      }
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    const AppState& s = apps[i];
    SimAppReport& r = report.apps[i];
    const double window = s.window_end - s.window_start;
    double total = 0.0;
    for (double w : s.response) total += w;
    r.mean_response_time = total / static_cast<double>(s.measured);
    r.ci_half_width = batch_means_half_width(s.response);
    r.mean_in_system = s.area_in_system / window;
    r.utilization = s.area_busy / (s.servers * window);
    r.effective_arrival_rate = static_cast<double>(s.measured) / window;
    r.little_residual =
        std::abs(r.mean_in_system - r.effective_arrival_rate * r.mean_response_time) /
        r.mean_in_system;
    r.completed = s.completed;
    r.arrivals = s.arrival_time.size();
    r.departures = s.departures;
    r.in_system_at_end = s.in_system();
    r.horizon = s.horizon;
  }
  return report;
}

DeviationReport compare_to_analytic(const SimReport& report,
                                    const std::vector<ClusterConfig>& configs,
                                    const std::vector<AppProfile>& profiles,
                                    double threshold) {
  if (report.apps.size() != configs.size() || configs.size() != profiles.size()) {
    throw InputError("report, configs and profiles differ in size");
  }
  DeviationReport out;
  out.threshold = threshold;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const ClusterConfig& c = configs[i];
    const QueueParams q{c.n_containers, profiles[i].arrival_rate,
                        service_rate(profiles[i], c.r_cpu, c.r_mem)};
    AppDeviation d;
    d.name = report.apps[i].name;
    d.w_sim = report.apps[i].mean_response_time;
    d.w_analytic = mean_response_time_or_inf(q);
    if (report.apps[i].unstable || !std::isfinite(d.w_analytic)) {
      d.rel_err = std::numeric_limits<double>::quiet_NaN();
      d.status = "not_compared";
    } else {
      d.rel_err = std::abs(d.w_sim - d.w_analytic) / d.w_analytic;
      d.status = d.rel_err <= threshold ? "pass" : "fail";
      out.passed = out.passed && d.status == "pass";
    }
    out.apps.push_back(d);
  }
  return out;
}

void write_sim_csv(std::ostream& out, const SimReport& report,
                   const DeviationReport& deviation, bool with_status) {
  out << kSimHeader << (with_status ? ",status" : "") << '\n';
  for (std::size_t i = 0; i < report.apps.size(); ++i) {
    const SimAppReport& r = report.apps[i];
    const AppDeviation& d = deviation.apps.at(i);
    out << r.name << ',' << text::format_double(r.mean_response_time) << ','
        << text::format_double(r.ci_half_width) << ',' << text::format_double(r.mean_in_system) << ','
        << text::format_double(r.utilization) << ',' << r.completed << ','
        << (r.unstable ? "true" : "false") << ',' << text::format_double(d.w_analytic) << ','
        << text::format_double(d.rel_err);
    if (with_status) out << ',' << d.status;
    out << '\n';
  }
}

}  // namespace crms
