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

#include "crms/optimizer.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <ostream>

#include <boost/math/special_functions/lambert_w.hpp>
#include <boost/math/tools/roots.hpp>

#include "crms/errors.h"
#include "crms/queueing.h"
#include "text_util.h"

namespace crms {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSp1Floor = 1e-6;  // cores
constexpr int kExhaustiveRange = 12;
constexpr double kTieTolerance = 1e-12;

double unit_scale(const AppProfile& p) { return seconds_per_unit(p.unit); }

// CPU and memory parts of the M1 delay, in the profile's latency unit.
double cpu_part(const AppProfile& p, double r) {
  return -p.latency.kappa1 / std::expm1(p.latency.kappa2 * r);
}
double cpu_part_slope(const AppProfile& p, double r) {
  const double x = p.latency.kappa2 * r;
  return p.latency.kappa1 * p.latency.kappa2 / (std::expm1(x) * -std::expm1(-x));
}
double mem_part(const AppProfile& p, double m) { return std::exp(p.latency.kappa3 / m); }
double mem_part_slope(const AppProfile& p, double m) {
  return -p.latency.kappa3 / (m * m) * std::exp(p.latency.kappa3 / m);
}

// Offered load lambda / mu = lambda x d.
double offered_load(const AppProfile& p, double r, double m) {
  return p.arrival_rate * p.mean_images * unit_scale(p) * (cpu_part(p, r) + mem_part(p, m));
}

int upper_count(double budget, double per_container) {
  const double q = budget / per_container * (1.0 + 1e-12);
  return q >= std::numeric_limits<int>::max() ? std::numeric_limits<int>::max()
                                               : static_cast<int>(std::floor(q));
}

void validate_inputs(std::span<const AppProfile> profiles, const ServerSpec& server,
                     const Weights& weights) {
  server.validate();
  weights.validate();
  for (const auto& p : profiles) p.validate();
}

// ---------------------------------------------------------------------------
// P1 machinery. For prices (nu_cpu, nu_mem) the Lagrangian separates; app i
// minimizes U_i + nu_cpu N r + nu_mem N m. Writing S = alpha x (L_q'(a) + 1)
// (times the unit scale), stationarity reads
//   S f'(r) + c1 = 0,  S g'(m) + c2 = 0   (m projected on [r_min, r_max])
// with c1 = beta dP_full N / (lambda R_cpu) + nu_cpu N and c2 = nu_mem N. Both
// invert in closed form for given S, and a(S(a)) - a is strictly decreasing
// in the offered load a, so each app reduces to one bracketed root.

struct AppPrimal {
  double r = 0.0;
  double m = 0.0;
  double a = 0.0;
  bool ok = true;
};

struct DualPoint {
  std::vector<AppPrimal> apps;
  double cpu_usage = 0.0;
  double mem_usage = 0.0;
};

class P1Problem {
 public:
  P1Problem(std::span<const AppProfile> profiles, std::span<const int> counts,
            const ServerSpec& server, const Weights& weights)
      : profiles_(profiles), counts_(counts), server_(server), weights_(weights) {}

  double delay_weight(std::size_t i) const {
    const AppProfile& p = profiles_[i];
    return weights_.alpha * p.mean_images * unit_scale(p);
  }

  double power_price(std::size_t i) const {
    const AppProfile& p = profiles_[i];
    return weights_.beta * server_.dynamic_power() * counts_[i] /
           (p.arrival_rate * server_.cpu_total);
  }

  double cpu_for_s(std::size_t i, double s, double c1) const {
    if (!(c1 > 0.0)) return kInf;
    const AppProfile& p = profiles_[i];
    const double g = s * -p.latency.kappa1 * p.latency.kappa2;
    const double v = (g + std::sqrt(g * (g + 4.0 * c1))) / (2.0 * c1);
    return std::log1p(v) / p.latency.kappa2;
  }

  double mem_for_s(std::size_t i, double s, double c2) const {
    const AppProfile& p = profiles_[i];
    if (!(c2 > 0.0)) return p.r_max;
    const double z = 0.5 * std::sqrt(p.latency.kappa3 * c2 / s);
    const double y = 2.0 * boost::math::lambert_w0(z);
    const double m = y > 0.0 ? p.latency.kappa3 / y : kInf;
    return std::clamp(m, p.r_min, p.r_max);
  }

  AppPrimal solve_app(std::size_t i, double nu_cpu, double nu_mem) const {
    const AppProfile& p = profiles_[i];
    const int n = counts_[i];
    const double w = delay_weight(i);
    const double c1 = power_price(i) + nu_cpu * n;
    const double c2 = nu_mem * n;
    const auto primal_at = [&](double a) {
      const double s = w * (queue_length_slope(n, a).dl_q_da + 1.0);
      return std::pair{cpu_for_s(i, s, c1), mem_for_s(i, s, c2)};
    };
    const auto h = [&](double a) {
      const auto [r, m] = primal_at(a);
      return offered_load(p, r, m) - a;
    };
    const double lo = n * 1e-12;
    const double hi = n * (1.0 - 1e-13);
    const double h_lo = h(lo);
    const double h_hi = h(hi);
    AppPrimal out;
    if (!(h_hi < 0.0)) {
      out.ok = false;
      return out;
    }
    double a = lo;
    if (h_lo > 0.0) {
      boost::uintmax_t iters = 200;
      const auto [x0, x1] = boost::math::tools::toms748_solve(
          h, lo, hi, h_lo, h_hi, boost::math::tools::eps_tolerance<double>(52), iters);
      a = std::abs(h(x0)) <= std::abs(h(x1)) ? x0 : x1;
    }
    std::tie(out.r, out.m) = primal_at(a);
    out.a = offered_load(p, out.r, out.m);
    return out;
  }

  // Empty when some app has no stable stationary point at these prices.
  std::optional<DualPoint> try_evaluate(double nu_cpu, double nu_mem) const {
    DualPoint d;
    d.apps.resize(profiles_.size());
    for (std::size_t i = 0; i < profiles_.size(); ++i) {
      d.apps[i] = solve_app(i, nu_cpu, nu_mem);
      if (!d.apps[i].ok) return std::nullopt;
      d.cpu_usage += counts_[i] * d.apps[i].r;
      d.mem_usage += counts_[i] * d.apps[i].m;
    }
    return d;
  }

  DualPoint evaluate(double nu_cpu, double nu_mem) const {
    auto d = try_evaluate(nu_cpu, nu_mem);
    if (!d) {
      throw ConvergenceError("P1: no stable stationary point at prices (" +
                             text::format_double(nu_cpu) + ", " +
                             text::format_double(nu_mem) + ")");
    }
    return *std::move(d);
  }

  std::span<const AppProfile> profiles_;
  std::span<const int> counts_;
  const ServerSpec& server_;
  const Weights& weights_;
};

// Smallest price at which the nonincreasing `excess` is <= 0, approached from
// the feasible side. excess(0) must be positive; +inf and -inf are allowed.
template <class F>
double price_root(F&& excess, const std::string& binding) {
  double hi = 1e-6;
  double e_hi = excess(hi);
  double lo = 0.0;
  double e_lo = kInf;
  if (e_hi <= 0.0) {
    for (;;) {
      const double x = hi / 16.0;
      if (x < 1e-300) return hi;
      const double e = excess(x);
      if (e > 0.0) {
        lo = x;
        e_lo = e;
        break;
      }
      hi = x;
      e_hi = e;
    }
  } else {
    for (;;) {
      lo = hi;
      e_lo = e_hi;
      hi *= 16.0;
      if (hi > 1e200) {
        throw InfeasibleError(binding, "no price satisfies the " + binding + " budget");
      }
      e_hi = excess(hi);
      if (e_hi <= 0.0) break;
    }
  }
  while (!(std::isfinite(e_lo) && std::isfinite(e_hi))) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) return hi;
    const double e = excess(mid);
    if (e > 0.0) {
      lo = mid;
      e_lo = e;
    } else {
      hi = mid;
      e_hi = e;
    }
  }
  if (e_hi == 0.0) return hi;
  boost::uintmax_t iters = 200;
  const auto bracket = boost::math::tools::toms748_solve(
      excess, lo, hi, e_lo, e_hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return bracket.second;
}

Allocation allocation_from(const P1Solution& sol, std::span<const AppProfile> profiles,
                           const ServerSpec& server, const Weights& weights) {
  std::vector<ClusterConfig> cfgs(sol.counts.size());
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    cfgs[i] = {sol.counts[i], sol.quotas[i].r_cpu, sol.quotas[i].r_mem};
  }
  return system_utility(cfgs, profiles, server, weights);
}

}  // namespace

double sp1_objective(const AppProfile& p, const ServerSpec& server, const Weights& weights,
                     double r_cpu, double r_mem) {
  return weights.alpha * p.mean_images * unit_scale(p) *
             (cpu_part(p, r_cpu) + mem_part(p, r_mem)) +
         weights.beta * server.dynamic_power() * r_cpu / (p.arrival_rate * server.cpu_total);
}

double sp1_cpu_derivative(const AppProfile& p, const ServerSpec& server,
                          const Weights& weights, double r_cpu) {
  return weights.alpha * p.mean_images * unit_scale(p) * cpu_part_slope(p, r_cpu) +
         weights.beta * server.dynamic_power() / (p.arrival_rate * server.cpu_total);
}

Sp1Solution solve_sp1(const AppProfile& profile, const ServerSpec& server,
                      const Weights& weights, std::optional<double> cpu_cap) {
  profile.validate();
  server.validate();
  weights.validate();
  if (cpu_cap && !(*cpu_cap > kSp1Floor)) {
    throw InputError("SP1 CPU cap must exceed " + text::format_double(kSp1Floor) + " cores");
  }
  if (!cpu_cap && weights.beta == 0.0) {
    throw UnboundedError(profile.name +
                         ": beta = 0 without a CPU cap drives the quota to infinity");
  }
  const auto deriv = [&](double r) { return sp1_cpu_derivative(profile, server, weights, r); };
  Sp1Solution out;
  out.r_mem = profile.r_max;
  double lo = kSp1Floor;
  double hi;
  if (cpu_cap) {
    hi = *cpu_cap;
    if (deriv(hi) <= 0.0) {
      out.r_cpu = hi;
      out.clipped = true;
    }
  } else {
    hi = 1.0;
    while (deriv(hi) <= 0.0) hi *= 2.0;
  }
  if (!out.clipped) {
    if (deriv(lo) >= 0.0) {
      out.r_cpu = lo;
      out.clipped = true;
    } else {
      for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (deriv(mid) < 0.0 ? lo : hi) = mid;
      }
      out.r_cpu = std::abs(deriv(lo)) <= std::abs(deriv(hi)) ? lo : hi;
      out.stationarity_residual = std::abs(deriv(out.r_cpu));
    }
  }
  out.f_value = sp1_objective(profile, server, weights, out.r_cpu, out.r_mem);
  return out;
}

double phi(int n, const AppProfile& profile, const Quota& quota, const ServerSpec& server,
           const Weights& weights) {
  return app_utility(profile, {n, quota.r_cpu, quota.r_mem}, server, weights);
}

namespace {

Sp2Solution sp2_range(const AppProfile& profile, const Quota& quota,
                      const ServerSpec& server, const Weights& weights) {
  profile.validate();
  server.validate();
  weights.validate();
  const double mu = service_rate(profile, quota.r_cpu, quota.r_mem);
  Sp2Solution s;
  s.lower = min_stable_servers(profile.arrival_rate, mu);
  const int cpu_upper = upper_count(server.cpu_total, quota.r_cpu);
  const int mem_upper = upper_count(server.mem_total, quota.r_mem);
  s.upper = std::min(cpu_upper, mem_upper);
  if (s.upper < s.lower) {
    const std::string binding = cpu_upper < s.lower ? "cpu" : "memory";
    throw InfeasibleError(binding, profile.name + ": " + std::to_string(s.lower) +
                                       " containers are needed for stability but the " +
                                       binding + " budget fits " +
                                       std::to_string(s.upper));
  }
  return s;
}

}  // namespace

Sp2Solution solve_sp2_exhaustive(const AppProfile& profile, const Quota& quota,
                                 const ServerSpec& server, const Weights& weights) {
  Sp2Solution s = sp2_range(profile, quota, server, weights);
  s.n_star = s.lower;
  s.phi_value = kInf;
  for (int n = s.lower; n <= s.upper; ++n) {
    const double v = phi(n, profile, quota, server, weights);
    if (v < s.phi_value) {
      s.phi_value = v;
      s.n_star = n;
    }
  }
  return s;
}

Sp2Solution solve_sp2(const AppProfile& profile, const Quota& quota,
                      const ServerSpec& server, const Weights& weights) {
  Sp2Solution s = sp2_range(profile, quota, server, weights);
  if (s.upper - s.lower + 1 <= kExhaustiveRange) {
    return solve_sp2_exhaustive(profile, quota, server, weights);
  }
  const auto f = [&](int n) { return phi(n, profile, quota, server, weights); };
  int lo = s.lower;
  int hi = s.upper;
  while (hi - lo > 2) {
    const int m1 = lo + (hi - lo) / 3;
    const int m2 = hi - (hi - lo) / 3;
    const double f1 = f(m1);
    const double f2 = f(m2);
    if (f1 < f2) {
      hi = m2 - 1;
    } else if (f1 > f2) {
      lo = m1 + 1;
    } else {
      lo = m1;
      hi = m2;
    }
  }
  int best = lo;
  double best_value = f(lo);
  for (int n = lo + 1; n <= hi; ++n) {
    const double v = f(n);
    if (v < best_value) {
      best = n;
      best_value = v;
    }
  }
  while (best > s.lower) {
    const double v = f(best - 1);
    if (!(v <= best_value)) break;
    --best;
    best_value = v;
  }
  while (best < s.upper) {
    const double v = f(best + 1);
    if (!(v < best_value)) break;
    ++best;
    best_value = v;
  }
  s.n_star = best;
  s.phi_value = best_value;
  return s;
}

Allocation unconstrained_plan(std::span<const AppProfile> profiles, const ServerSpec& server,
                              const Weights& weights) {
  validate_inputs(profiles, server, weights);
  std::vector<ClusterConfig> cfgs;
  cfgs.reserve(profiles.size());
  for (const AppProfile& p : profiles) {
    const Sp1Solution q = solve_sp1(p, server, weights, server.cpu_total);
    const Sp2Solution n = solve_sp2(p, {q.r_cpu, q.r_mem}, server, weights);
    cfgs.push_back({n.n_star, q.r_cpu, q.r_mem});
  }
  return system_utility(cfgs, profiles, server, weights);
}

KktReport kkt_report(const P1Solution& sol, std::span<const AppProfile> profiles,
                     const ServerSpec& server, const Weights& weights) {
  if (sol.counts.size() != profiles.size() || sol.quotas.size() != profiles.size()) {
    throw InputError("P1 solution does not match the application list");
  }
  const P1Problem prob(profiles, sol.counts, server, weights);
  KktReport k;
  k.nu_cpu = sol.kkt.nu_cpu;
  k.nu_mem = sol.kkt.nu_mem;
  double cpu = 0.0, mem = 0.0, box = 0.0;
  k.stationarity.resize(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const AppProfile& p = profiles[i];
    const int n = sol.counts[i];
    const double r = sol.quotas[i].r_cpu;
    const double m = sol.quotas[i].r_mem;
    cpu += n * r;
    mem += n * m;
    box = std::max({box, p.r_min - m, m - p.r_max, -r});
    const double a = r > 0.0 ? offered_load(p, r, m) : kInf;
    if (!(a < n)) {
      k.stationarity[i] = kInf;
      continue;
    }
    const double s = prob.delay_weight(i) * (queue_length_slope(n, a).dl_q_da + 1.0);
    const double dr = s * cpu_part_slope(p, r) + prob.power_price(i) + k.nu_cpu * n;
    double dm = s * mem_part_slope(p, m) + k.nu_mem * n;
    const double eps = 1e-9 * std::max(1.0, p.r_max);
    if ((m <= p.r_min + eps && dm > 0.0) || (m >= p.r_max - eps && dm < 0.0)) dm = 0.0;
    k.stationarity[i] = std::max(std::abs(dr), std::abs(dm));
  }
  k.cpu_slack = server.cpu_total - cpu;
  k.mem_slack = server.mem_total - mem;
  k.cpu_complementarity = std::abs(k.nu_cpu * k.cpu_slack);
  k.mem_complementarity = std::abs(k.nu_mem * k.mem_slack);
  k.residual = std::max({0.0, -k.cpu_slack, -k.mem_slack, box, -k.nu_cpu, -k.nu_mem,
                         k.cpu_complementarity, k.mem_complementarity});
  for (double s : k.stationarity) k.residual = std::max(k.residual, s);
  return k;
}

double kkt_residual(const P1Solution& sol, std::span<const AppProfile> profiles,
                    const ServerSpec& server, const Weights& weights) {
  return kkt_report(sol, profiles, server, weights).residual;
}

P1Solution solve_p1(std::span<const AppProfile> profiles, std::span<const int> counts,
                    const ServerSpec& server, const Weights& weights, double tolerance) {
  validate_inputs(profiles, server, weights);
  if (counts.size() != profiles.size()) {
    throw InputError("P1 needs one container count per application");
  }
  if (profiles.empty()) throw InputError("P1 needs at least one application");
  double mem_floor = 0.0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    if (counts[i] < 1) throw InputError(profiles[i].name + ": container count must be >= 1");
    mem_floor += counts[i] * profiles[i].r_min;
  }
  if (mem_floor > server.mem_total * (1.0 + kBudgetTolerance)) {
    throw InfeasibleError("memory", "memory floors need " + text::format_double(mem_floor) +
                                        " MB of " + text::format_double(server.mem_total));
  }
  double cpu_floor = 0.0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const AppProfile& p = profiles[i];
    const double per_image = counts[i] / (p.arrival_rate * p.mean_images * unit_scale(p));
    const double headroom = per_image - mem_part(p, p.r_max);
    if (!(headroom > 0.0)) {
      throw InfeasibleError("stability", p.name + ": " + std::to_string(counts[i]) +
                                             " containers cannot be stable at any quota");
    }
    cpu_floor += counts[i] * std::log1p(-p.latency.kappa1 / headroom) / p.latency.kappa2;
  }
  if (cpu_floor >= server.cpu_total) {
    throw InfeasibleError("cpu", "stability needs more than " +
                                     text::format_double(server.cpu_total) + " cores");
  }

  const P1Problem prob(profiles, counts, server, weights);
  // A CPU price high enough to destabilize an app lies past every price that
  // meets the CPU budget, so it counts as excess demand.
  const auto inner = [&](double nu_mem, double* nu_cpu_out) {
    auto start = prob.try_evaluate(0.0, nu_mem);
    if (!start) throw InfeasibleError("cpu", "no stable quotas at this memory price");
    DualPoint d = *std::move(start);
    double nu_cpu = 0.0;
    if (d.cpu_usage > server.cpu_total) {
      nu_cpu = price_root(
          [&](double nu) {
            const auto e = prob.try_evaluate(nu, nu_mem);
            return e ? e->cpu_usage - server.cpu_total : kInf;
          },
          "cpu");
      d = prob.evaluate(nu_cpu, nu_mem);
    }
    *nu_cpu_out = nu_cpu;
    return d;
  };

  double nu_cpu = 0.0;
  double nu_mem = 0.0;
  DualPoint d = inner(0.0, &nu_cpu);
  if (d.mem_usage > server.mem_total) {
    nu_mem = price_root(
        [&](double nu) {
          double unused;
          try {
            return inner(nu, &unused).mem_usage - server.mem_total;
          } catch (const InfeasibleError&) {
            return -kInf;
          }
        },
        "memory");
    try {
      d = inner(nu_mem, &nu_cpu);
    } catch (const InfeasibleError&) {
      throw InfeasibleError("cpu+memory",
                            "the CPU and memory budgets cannot both hold at these counts");
    }
  }

  P1Solution sol;
  sol.counts.assign(counts.begin(), counts.end());
  sol.quotas.resize(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    sol.quotas[i] = {d.apps[i].r, d.apps[i].m};
  }
  sol.kkt.nu_cpu = nu_cpu;
  sol.kkt.nu_mem = nu_mem;
  sol.kkt = kkt_report(sol, profiles, server, weights);
  sol.objective = allocation_from(sol, profiles, server, weights).utility;
  if (!(sol.kkt.residual <= tolerance)) {
    throw ConvergenceError("P1 stopped with KKT residual " +
                           text::format_double(sol.kkt.residual) + " (nu_cpu " +
                           text::format_double(nu_cpu) + ", nu_mem " +
                           text::format_double(nu_mem) + ", objective " +
                           text::format_double(sol.objective) + ")");
  }
  return sol;
}

CrmsResult crms_plan(std::span<const AppProfile> profiles, const ServerSpec& server,
                const Weights& weights, const CrmsOptions& options) {
  CrmsResult result;
  Allocation current = unconstrained_plan(profiles, server, weights);
  std::vector<int> counts;
  for (const auto& a : current.apps) counts.push_back(a.config.n_containers);
  result.trace.start = "unconstrained";
  if (!current.feasible) {
    P1Solution sol;
    try {
      sol = solve_p1(profiles, counts, server, weights);
      result.trace.start = "p1";
    } catch (const InfeasibleError&) {
      for (std::size_t i = 0; i < profiles.size(); ++i) {
        counts[i] = min_stable_servers(profiles[i].arrival_rate, current.apps[i].mu);
      }
      sol = solve_p1(profiles, counts, server, weights);
      result.trace.start = "p1-min-stable";
    }
    current = allocation_from(sol, profiles, server, weights);
  }
  result.trace.start_utility = current.utility;

  const int m = static_cast<int>(profiles.size());
  for (;;) {
    std::vector<double> values(m, kInf);
    std::vector<Allocation> allocs(m);
    std::vector<std::exception_ptr> errors(m);
#pragma omp parallel for schedule(dynamic) if (options.parallel)
    for (int i = 0; i < m; ++i) {
      if (counts[i] <= 1) continue;
      std::vector<int> trial = counts;
      --trial[i];
      try {
        const P1Solution sol = solve_p1(profiles, trial, server, weights);
        allocs[i] = allocation_from(sol, profiles, server, weights);
        values[i] = allocs[i].utility;
      } catch (const InfeasibleError&) {
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    int best = -1;
    for (int i = 0; i < m; ++i) {
      if (!std::isfinite(values[i])) continue;
      if (best < 0 ||
          values[i] < values[best] - kTieTolerance * std::abs(values[best])) {
        best = i;
      }
    }
    CrmsStep step;
    step.app = best;
    step.utility = best < 0 ? kInf : values[best];
    step.accepted =
        best >= 0 && values[best] < current.utility - kTieTolerance * std::abs(current.utility);
    result.trace.steps.push_back(step);
    if (!step.accepted) break;
    --counts[best];
    current = std::move(allocs[best]);
  }
  result.allocation = std::move(current);
  return result;
}

void write_trace(std::ostream& out, const CrmsTrace& trace,
                 std::span<const AppProfile> profiles) {
  out << "start=" << trace.start << " U_p=" << text::format_double(trace.start_utility, 17)
      << '\n';
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const CrmsStep& s = trace.steps[k];
    out << "round=" << k + 1
        << " app=" << (s.app >= 0 ? profiles[s.app].name : std::string("-"))
        << " U_p=" << text::format_double(s.utility, 17)
        << " accepted=" << (s.accepted ? 1 : 0) << '\n';
  }
}

}  // namespace crms
