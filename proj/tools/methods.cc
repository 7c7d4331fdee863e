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

#include "methods.h"

#include <omp.h>

#include <cmath>
#include <algorithm>
#include <exception>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "crms/errors.h"
#include "text_util.h"

namespace crms::cli {
namespace {

std::string join_violations(const FeasibilityReport& r) {
  std::string out;
  for (const std::string& v : r.violations) out += (out.empty() ? "" : "; ") + v;
  return out;
}

std::vector<double> parse_list(const std::string& field, const std::string& source,
                               int line) {
  std::vector<double> out;
  for (const std::string& item : text::split(field, ';')) {
    const auto v = text::parse_double(item);
    if (!v) throw ParseError(source, line, "bad number '" + item + "'");
    out.push_back(*v);
  }
  return out;
}

}  // namespace

std::optional<Method> parse_method(const std::string& name) {
  if (name == "crms") return Method::kCrms;
  if (name == "snfc1") return Method::kSnfc1;
  if (name == "snfc2") return Method::kSnfc2;
  if (name == "rs") return Method::kRandomSearch;
  if (name == "drf") return Method::kDrf;
  if (name == "brute") return Method::kBrute;
  return std::nullopt;
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kCrms: return "crms";
    case Method::kSnfc1: return "snfc1";
    case Method::kSnfc2: return "snfc2";
    case Method::kRandomSearch: return "rs";
    case Method::kDrf: return "drf";
    case Method::kBrute: return "brute";
  }
  return "?";
}

GridSpec read_grid_csv(std::istream& in, const std::string& source, const Scenario& scenario) {
  GridSpec spec;
  spec.apps.resize(scenario.apps.size());
  std::vector<bool> seen(scenario.apps.size(), false);
  std::string line;
  int line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = text::split(t, ',');
    if (header) {
      if (fields != std::vector<std::string>{"app", "n_min", "n_max", "r_cpu", "r_mem"}) {
        throw ParseError(source, line_no, "expected header app,n_min,n_max,r_cpu,r_mem");
      }
      header = false;
      continue;
    }
    if (fields.size() != 5) throw ParseError(source, line_no, "expected 5 fields");
    const int i = scenario.index_of(fields[0]);
    if (i < 0) throw ParseError(source, line_no, "unknown app '" + fields[0] + "'");
    if (seen[i]) throw ParseError(source, line_no, "duplicate app '" + fields[0] + "'");
    seen[i] = true;
    const auto lo = text::parse_int(fields[1]);
    const auto hi = text::parse_int(fields[2]);
    if (!lo || !hi) throw ParseError(source, line_no, "bad container range");
    spec.apps[i] = {static_cast<int>(*lo), static_cast<int>(*hi),
                    parse_list(fields[3], source, line_no),
                    parse_list(fields[4], source, line_no)};
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw ParseError(source, line_no, "no grid row for app '" + scenario.apps[i].name + "'");
  }
  return spec;
}

GridSpec grid_for(const Scenario& scenario, const GridFlags& flags) {
  if (flags.grid_file) {
    std::ifstream in(*flags.grid_file);
    if (!in) throw InputError("cannot open grid file " + *flags.grid_file);
    return read_grid_csv(in, *flags.grid_file, scenario);
  }
  return GridSpec::uniform(scenario.apps, flags.n_min, flags.n_max, flags.cpu_step,
                           flags.cpu_max, flags.mem_step);
}

MethodOutcome run_method(Method method, const Scenario& scenario, const MethodOptions& options) {
  MethodOutcome out;
  const auto& apps = scenario.apps;
  try {
    switch (method) {
      case Method::kCrms: {
        CrmsResult r = crms_plan(apps, scenario.server, scenario.weights, {options.parallel});
        out.allocation = std::move(r.allocation);
        out.trace = std::move(r.trace);
        break;
      }
      case Method::kSnfc1:
      case Method::kSnfc2:
        out.allocation = snfc_plan(method == Method::kSnfc1 ? kSnfc1 : kSnfc2, apps,
                                   scenario.server, scenario.weights);
        break;
      case Method::kRandomSearch: {
        const RandomSearchResult r = random_search(
            apps, scenario.server, scenario.weights,
            {options.rs_budget, options.seed, options.parallel});
        if (!r.found) {
          out.binding = "no feasible sample in " + std::to_string(options.rs_budget);
          return out;
        }
        out.allocation = r.best;
        break;
      }
      case Method::kDrf:
        out.allocation = drf_plan(apps, default_drf_demands(apps, scenario.server,
                                                            scenario.weights),
                                  scenario.server, scenario.weights)
                             .allocation;
        break;
      case Method::kBrute:
        out.allocation = brute_force_grid(apps, scenario.server, scenario.weights,
                                          grid_for(scenario, options.grid),
                                          {options.max_combinations, options.parallel});
        break;
    }
  } catch (const InfeasibleError& e) {
    out.allocation.reset();
    out.binding = e.binding() + ": " + e.what();
    return out;
  }
  const auto cfgs = out.allocation->configs();
  const FeasibilityReport report = check_feasible(cfgs, apps, scenario.server);
  out.feasible = report.feasible && out.allocation->feasible;
  if (!out.feasible) out.binding = join_violations(report);
  return out;
}

std::string summary_line(Method method, const MethodOutcome& o) {
  std::ostringstream s;
  s << "method=" << method_name(method);
  if (o.allocation) {
    s << " U_p=" << text::format_double(o.allocation->utility)
      << " delay=" << text::format_double(o.allocation->delay_term())
      << " power=" << text::format_double(o.allocation->power_term());
  }
  s << " feasible=" << (o.feasible ? "true" : "false");
  if (!o.binding.empty()) s << " binding=\"" << o.binding << '"';
  return s.str();
}

std::optional<SweepParam> parse_sweep_param(const std::string& name) {
  if (name == "lambda") return SweepParam::kLambda;
  if (name == "x_mean") return SweepParam::kXMean;
  if (name == "cpu_total") return SweepParam::kCpuTotal;
  if (name == "mem_total") return SweepParam::kMemTotal;
  if (name == "alpha") return SweepParam::kAlpha;
  if (name == "beta") return SweepParam::kBeta;
  return std::nullopt;
}

std::string sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::kLambda: return "lambda";
    case SweepParam::kXMean: return "x_mean";
    case SweepParam::kCpuTotal: return "cpu_total";
    case SweepParam::kMemTotal: return "mem_total";
    case SweepParam::kAlpha: return "alpha";
    case SweepParam::kBeta: return "beta";
  }
  return "?";
}

bool is_per_app(SweepParam p) { return p == SweepParam::kLambda || p == SweepParam::kXMean; }

std::vector<double> SweepAxis::values() const {
  std::vector<double> out;
  const double eps = 1e-9 * step;
  for (long k = 0;; ++k) {
    const double v = start + static_cast<double>(k) * step;
    if (v > stop + eps) break;
    out.push_back(v);
  }
  return out;
}

void SweepAxis::validate(const Scenario& scenario) const {
  if (!(step > 0.0)) throw InputError("sweep step must be positive");
  if (!(start <= stop)) throw InputError("sweep start must not exceed stop");
  if (target != "all") {
    if (!is_per_app(param)) {
      throw InputError(sweep_param_name(param) + " is a server or weight parameter; use --app all");
    }
    if (scenario.index_of(target) < 0) throw InputError("unknown app '" + target + "'");
  }
}

SweepAxis parse_axis(SweepParam param, const std::string& range, const std::string& target) {
  SweepAxis axis;
  axis.param = param;
  axis.target = target;
  const auto parts = text::split(range, ':');
  std::vector<double> v;
  for (const std::string& p : parts) {
    const auto d = text::parse_double(p);
    if (!d) throw InputError("bad range '" + range + "'; expected start:stop:step");
    v.push_back(*d);
  }
  if (v.size() == 1) {
    axis.start = axis.stop = v[0];
  } else if (v.size() == 3) {
    axis.start = v[0];
    axis.stop = v[1];
    axis.step = v[2];
  } else {
    throw InputError("bad range '" + range + "'; expected start:stop:step");
  }
  return axis;
}

Scenario apply_axis(const Scenario& base, const SweepAxis& axis, double value) {
  Scenario s = base;
  for (AppProfile& a : s.apps) {
    if (axis.target != "all" && a.name != axis.target) continue;
    if (axis.param == SweepParam::kLambda) a.arrival_rate = value;
    if (axis.param == SweepParam::kXMean) a.mean_images = value;
  }
  if (axis.param == SweepParam::kCpuTotal) s.server.cpu_total = value;
  if (axis.param == SweepParam::kMemTotal) s.server.mem_total = value;
  if (axis.param == SweepParam::kAlpha) s.weights.alpha = value;
  if (axis.param == SweepParam::kBeta) s.weights.beta = value;
  s.validate();
  return s;
}

std::vector<SweepPoint> run_sweep(const Scenario& base, const SweepAxis& outer,
                                  const std::optional<SweepAxis>& inner, Method method,
                                  const MethodOptions& options, int jobs) {
  outer.validate(base);
  if (inner) inner->validate(base);
  std::vector<SweepPoint> points;
  for (double v : outer.values()) {
    const Scenario s = apply_axis(base, outer, v);
    if (!inner) {
      points.push_back({v, std::nullopt, s, {}});
      continue;
    }
    for (double w : inner->values()) points.push_back({v, w, apply_axis(s, *inner, w), {}});
  }
  // Points run concurrently, so each method runs its own kernels serially.
  MethodOptions point_options = options;
  point_options.parallel = false;
  std::vector<std::exception_ptr> errors(points.size());
  const long n = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(1, jobs))
  for (long k = 0; k < n; ++k) {
    try {
      points[k].outcome = run_method(method, points[k].scenario, point_options);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return points;
}

void write_sweep_csv(std::ostream& out, const SweepAxis& outer,
                     const std::optional<SweepAxis>& inner,
                     const std::vector<SweepPoint>& points) {
  using text::format_double;
  out << kSweepHeader << '\n';
  const std::string inner_name = inner ? sweep_param_name(inner->param) : "";
  for (const SweepPoint& p : points) {
    const std::string prefix =
        sweep_param_name(outer.param) + ',' + format_double(p.value) + ',' + inner_name + ',' +
        (p.inner_value ? format_double(*p.inner_value) : "") + ',';
    const std::string feasible = p.outcome.feasible ? "true" : "false";
    if (!p.outcome.allocation) {
      for (const AppProfile& a : p.scenario.apps) {
        out << prefix << a.name << ",,,,,,,,,inf," << feasible << '\n';
      }
      continue;
    }
    const Allocation& alloc = *p.outcome.allocation;
    for (const AppOutcome& a : alloc.apps) {
      out << prefix << a.name << ',' << a.config.n_containers << ','
          << format_double(a.config.r_cpu, 17) << ',' << format_double(a.config.r_mem, 17)
          << ',' << format_double(a.mu) << ',' << format_double(a.rho) << ','
          << format_double(a.w_s) << ',' << format_double(a.delta_power) << ','
          << format_double(a.utility_share) << ',' << format_double(alloc.utility) << ','
          << feasible << '\n';
    }
  }
}

}  // namespace crms::cli
