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

#include "crms/model_fit.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <random>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include "crms/errors.h"
#include "text_util.h"

namespace crms {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// M1 is optimized over log-magnitudes so every iterate keeps its signs.
Eigen::VectorXd to_internal(ModelId model, const LatencyParams& p) {
  const int n = param_count(model);
  Eigen::VectorXd theta(n);
  if (model == ModelId::kM1) {
    theta << std::log(-p.kappa1), std::log(p.kappa2), std::log(p.kappa3);
  } else {
    for (int i = 0; i < n; ++i) theta[i] = p[i];
  }
  return theta;
}

LatencyParams to_external(ModelId model, const Eigen::VectorXd& theta) {
  LatencyParams p;
  if (model == ModelId::kM1) {
    p.kappa1 = -std::exp(theta[0]);
    p.kappa2 = std::exp(theta[1]);
    p.kappa3 = std::exp(theta[2]);
  } else {
    for (int i = 0; i < theta.size(); ++i) p[i] = theta[i];
  }
  return p;
}

double sum_squared_error(ModelId model, const LatencyParams& p,
                         std::span<const LatencySample> samples) {
  double sse = 0.0;
  for (const auto& s : samples) {
    const double e =
        eval_latency_unchecked(model, p, s.r_cpu, s.r_mem) - s.latency;
    sse += e * e;
  }
  return std::isfinite(sse) ? sse : kInf;
}

// Least-squares coefficients for y ~ X b with column scaling.
std::optional<Eigen::VectorXd> linear_fit(const Eigen::MatrixXd& x,
                                          const Eigen::VectorXd& y) {
  Eigen::VectorXd scale = x.colwise().norm().transpose();
  for (int j = 0; j < scale.size(); ++j) {
    if (!(scale[j] > 0.0) || !std::isfinite(scale[j])) return std::nullopt;
  }
  const Eigen::MatrixXd xs = x * scale.cwiseInverse().asDiagonal();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
  if (qr.rank() < xs.cols()) return std::nullopt;
  Eigen::VectorXd b = qr.solve(y);
  b = b.cwiseQuotient(scale);
  if (!b.allFinite()) return std::nullopt;
  return b;
}

// Scans (k2, k3) on a log grid; for fixed k2 and k3 the best k1 is a
// one-variable linear least-squares fit. Keeps the plain heuristic start when
// it is better.
LatencyParams m1_guess(std::span<const LatencySample> samples, double k1, double k2,
                       double k3) {
  LatencyParams best{k1, k2, k3, 0.0};
  double best_sse = sum_squared_error(ModelId::kM1, best, samples);
  if (!std::isfinite(best_sse)) best_sse = kInf;
  double min_mem = kInf, max_latency = 0.0;
  std::vector<double> cpu;
  for (const auto& s : samples) {
    min_mem = std::min(min_mem, s.r_mem);
    max_latency = std::max(max_latency, s.latency);
    cpu.push_back(s.r_cpu);
  }
  const double cpu_scale = median(cpu);
  // exp(k3 / m) must stay below the largest latency at the smallest memory.
  const double u_hi = std::max(std::log(std::max(max_latency, 1.0)), 1e-3);
  constexpr int kSteps = 40;
  for (int a = 0; a < kSteps; ++a) {
    const double c2 = 0.05 * std::pow(400.0, a / (kSteps - 1.0)) / cpu_scale;
    for (int b = 0; b < kSteps; ++b) {
      const double c3 = min_mem * u_hi * std::pow(1e-3, b / (kSteps - 1.0));
      double num = 0.0, den = 0.0;
      for (const auto& s : samples) {
        const double g = 1.0 / std::expm1(c2 * s.r_cpu);
        num += g * (s.latency - std::exp(c3 / s.r_mem));
        den += g * g;
      }
      const double c1 = -std::max(num / den, 1e-12 * max_latency);
      const LatencyParams cand{c1, c2, c3, 0.0};
      const double sse = sum_squared_error(ModelId::kM1, cand, samples);
      if (sse < best_sse) {
        best_sse = sse;
        best = cand;
      }
    }
  }
  return best;
}

LatencyParams default_guess(ModelId model,
                            std::span<const LatencySample> samples) {
  const std::size_t n = samples.size();
  std::vector<double> cpu(n), mem(n);
  double max_latency = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cpu[i] = samples[i].r_cpu;
    mem[i] = samples[i].r_mem;
    max_latency = std::max(max_latency, samples[i].latency);
  }
  const int n_rows = static_cast<int>(n);
  Eigen::VectorXd y(n_rows);
  for (int i = 0; i < n_rows; ++i) y[i] = samples[i].latency;

  LatencyParams p;
  switch (model) {
    case ModelId::kM1:
      return m1_guess(samples, -max_latency, 1.0 / median(cpu), median(mem));
    case ModelId::kM2: {
      Eigen::MatrixXd x(n_rows, 3);
      for (int i = 0; i < n_rows; ++i) {
        x(i, 0) = 1.0 / cpu[i];
        x(i, 1) = mem[i] * mem[i];
        x(i, 2) = mem[i];
      }
      if (auto b = linear_fit(x, y)) return {(*b)[0], (*b)[1], (*b)[2], 0.0};
      return {max_latency * median(cpu), 0.0, 0.0, 0.0};
    }
    case ModelId::kM3: {
      // 1/d is linear in the coefficients.
      Eigen::MatrixXd x(n_rows, 2);
      for (int i = 0; i < n_rows; ++i) {
        x(i, 0) = std::log1p(cpu[i]);
        x(i, 1) = std::log1p(mem[i]);
      }
      if (auto b = linear_fit(x, y.cwiseInverse())) {
        return {(*b)[0], (*b)[1], 0.0, 0.0};
      }
      return {1.0 / max_latency, 0.0, 0.0, 0.0};
    }
    case ModelId::kM4: {
      // With k1 = 1, 1/d = k2 + k3 r^2 + k4 m^2.
      Eigen::MatrixXd x(n_rows, 3);
      for (int i = 0; i < n_rows; ++i) {
        x(i, 0) = 1.0;
        x(i, 1) = cpu[i] * cpu[i];
        x(i, 2) = mem[i] * mem[i];
      }
      if (auto b = linear_fit(x, y.cwiseInverse())) {
        return {1.0, (*b)[0], (*b)[1], (*b)[2]};
      }
      return {max_latency, 1.0, 0.0, 0.0};
    }
    case ModelId::kM5: {
      Eigen::MatrixXd x(n_rows, 3);
      for (int i = 0; i < n_rows; ++i) {
        x(i, 0) = cpu[i] * cpu[i] * cpu[i];
        x(i, 1) = mem[i] * mem[i] * mem[i];
        x(i, 2) = cpu[i] * mem[i];
      }
      if (auto b = linear_fit(x, y)) return {(*b)[0], (*b)[1], (*b)[2], 0.0};
      return {0.0, 0.0, 0.0, 0.0};
    }
  }
  return p;
}

// k1 / (k2 + k3 r^2 + k4 m^2) is invariant to a common scale; report k1 = 1.
LatencyParams canonicalize(ModelId model, LatencyParams p) {
  if (model == ModelId::kM4 && p.kappa1 != 0.0 && std::isfinite(p.kappa1)) {
    const double s = p.kappa1;
    p.kappa1 = 1.0;
    p.kappa2 /= s;
    p.kappa3 /= s;
    p.kappa4 /= s;
  }
  return p;
}

void fill_metrics(FitResult& fit, std::span<const LatencySample> samples) {
  const std::size_t n = samples.size();
  std::vector<double> observed(n), predicted(n);
  fit.residuals.resize(n);
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    observed[i] = samples[i].latency;
    predicted[i] = eval_latency_unchecked(fit.model, fit.params,
                                          samples[i].r_cpu, samples[i].r_mem);
    const double e = observed[i] - predicted[i];
    fit.residuals[i] = {i, e};
    sse += e * e;
  }
  if (!std::isfinite(sse)) {
    fit.mse = fit.rmse = kInf;
    fit.r_squared = fit.adj_r_squared = -kInf;
    fit.converged = false;
    return;
  }
  fit.mse = sse / static_cast<double>(n);
  fit.rmse = std::sqrt(fit.mse);
  fit.r_squared = coefficient_of_determination(observed, predicted);
  fit.adj_r_squared =
      adjusted_r_squared(fit.r_squared, n, param_count(fit.model));
}

}  // namespace

int param_count(ModelId model) {
  switch (model) {
    case ModelId::kM3:
      return 2;
    case ModelId::kM4:
      return 4;
    default:
      return 3;
  }
}

std::string_view model_name(ModelId model) {
  static constexpr std::array<std::string_view, 5> kNames = {"M1", "M2", "M3",
                                                             "M4", "M5"};
  return kNames[static_cast<int>(model)];
}

std::string_view model_formula(ModelId model) {
  static constexpr std::array<std::string_view, 5> kFormulas = {
      "k1/(1-exp(k2*r_cpu)) + exp(k3/r_mem)",
      "k1/r_cpu + k2*r_mem^2 + k3*r_mem",
      "1/(k1*log(1+r_cpu) + k2*log(1+r_mem))",
      "k1/(k2 + k3*r_cpu^2 + k4*r_mem^2)",
      "k1*r_cpu^3 + k2*r_mem^3 + k3*r_cpu*r_mem",
  };
  return kFormulas[static_cast<int>(model)];
}

std::optional<ModelId> parse_model(std::string_view name) {
  for (ModelId m : kAllModels) {
    if (model_name(m) == name) return m;
  }
  if (name.size() == 2 && (name[0] == 'm') && name[1] >= '1' &&
      name[1] <= '5') {
    return static_cast<ModelId>(name[1] - '1');
  }
  return std::nullopt;
}

double LatencyParams::operator[](int i) const {
  switch (i) {
    case 0:
      return kappa1;
    case 1:
      return kappa2;
    case 2:
      return kappa3;
    default:
      return kappa4;
  }
}

double& LatencyParams::operator[](int i) {
  switch (i) {
    case 0:
      return kappa1;
    case 1:
      return kappa2;
    case 2:
      return kappa3;
    default:
      return kappa4;
  }
}

void validate_params(ModelId model, const LatencyParams& p) {
  for (int i = 0; i < param_count(model); ++i) {
    if (!std::isfinite(p[i])) {
      throw ParameterError("latency coefficient kappa" + std::to_string(i + 1) +
                           " is not finite");
    }
  }
  if (model == ModelId::kM1 &&
      !(p.kappa1 < 0.0 && p.kappa2 > 0.0 && p.kappa3 > 0.0)) {
    throw ParameterError(
        "M1 requires kappa1 < 0, kappa2 > 0 and kappa3 > 0 (got " +
        text::format_double(p.kappa1) + ", " + text::format_double(p.kappa2) +
        ", " + text::format_double(p.kappa3) + ")");
  }
}

double eval_latency_unchecked(ModelId model, const LatencyParams& p,
                              double r_cpu, double r_mem) {
  switch (model) {
    case ModelId::kM1:
      // k1 / (1 - e^x) == -k1 / expm1(x); stays finite for large x.
      return -p.kappa1 / std::expm1(p.kappa2 * r_cpu) +
             std::exp(p.kappa3 / r_mem);
    case ModelId::kM2:
      return p.kappa1 / r_cpu + p.kappa2 * r_mem * r_mem + p.kappa3 * r_mem;
    case ModelId::kM3:
      return 1.0 / (p.kappa1 * std::log1p(r_cpu) + p.kappa2 * std::log1p(r_mem));
    case ModelId::kM4:
      return p.kappa1 /
             (p.kappa2 + p.kappa3 * r_cpu * r_cpu + p.kappa4 * r_mem * r_mem);
    case ModelId::kM5:
      return p.kappa1 * r_cpu * r_cpu * r_cpu +
             p.kappa2 * r_mem * r_mem * r_mem + p.kappa3 * r_cpu * r_mem;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double eval_latency(ModelId model, const LatencyParams& params, double r_cpu,
                    double r_mem) {
  if (!(r_cpu > 0.0) || !(r_mem > 0.0)) {
    throw DomainError("resources must be positive (r_cpu=" +
                      text::format_double(r_cpu) +
                      ", r_mem=" + text::format_double(r_mem) + ")");
  }
  validate_params(model, params);
  return eval_latency_unchecked(model, params, r_cpu, r_mem);
}

double coefficient_of_determination(std::span<const double> observed,
                                    std::span<const double> predicted) {
  if (observed.size() != predicted.size() || observed.empty()) {
    throw InputError("observed/predicted size mismatch");
  }
  const double n = static_cast<double>(observed.size());
  const double mean = std::accumulate(observed.begin(), observed.end(), 0.0) / n;
  double sse = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    sse += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
    sst += (observed[i] - mean) * (observed[i] - mean);
  }
  if (!(sst > 0.0)) {
    throw ConditioningError("observations have zero variance");
  }
  return 1.0 - sse / sst;
}

double adjusted_r_squared(double r_squared, std::size_t n, int p) {
  if (n <= static_cast<std::size_t>(p)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  const double dn = static_cast<double>(n);
  return 1.0 - (1.0 - r_squared) * (dn - 1.0) / (dn - p);
}

FitResult fit_model(std::span<const LatencySample> samples, ModelId model,
                    const std::optional<LatencyParams>& initial_guess,
                    const FitOptions& options) {
  const int p = param_count(model);
  if (samples.size() < static_cast<std::size_t>(p) + 1) {
    throw InputError("model " + std::string(model_name(model)) + " needs at least " +
                     std::to_string(p + 1) + " samples, got " +
                     std::to_string(samples.size()));
  }
  bool distinct = false;
  for (const auto& s : samples) {
    if (!(s.r_cpu > 0.0 && s.r_mem > 0.0 && s.latency > 0.0)) {
      throw InputError("samples must have positive r_cpu, r_mem and latency");
    }
    if (s.r_cpu != samples[0].r_cpu || s.r_mem != samples[0].r_mem) {
      distinct = true;
    }
  }
  if (!distinct) {
    throw ConditioningError("all samples share one resource point");
  }
  {
    const double y0 = samples[0].latency;
    if (std::all_of(samples.begin(), samples.end(),
                    [y0](const LatencySample& s) { return s.latency == y0; })) {
      throw ConditioningError("all latencies are identical");
    }
  }

  FitResult fit;
  fit.model = model;
  LatencyParams params = initial_guess ? *initial_guess : default_guess(model, samples);
  validate_params(model, params);

  double sse = sum_squared_error(model, params, samples);
  if (!std::isfinite(sse)) {
    fit.params = params;
    fill_metrics(fit, samples);
    fit.converged = false;
    return fit;
  }

  const int n = static_cast<int>(samples.size());
  Eigen::VectorXd theta = to_internal(model, params);
  Eigen::MatrixXd jac(n, p);
  Eigen::VectorXd resid(n);
  double damping = 1e-3;
  bool converged = false;
  int iter = 0;

  const auto predict = [&](const LatencyParams& q, Eigen::VectorXd& out) {
    for (int i = 0; i < n; ++i) {
      out[i] = eval_latency_unchecked(model, q, samples[i].r_cpu, samples[i].r_mem);
    }
  };

  Eigen::VectorXd plus(n), minus(n);
  while (!converged && iter < options.max_iterations) {
    ++iter;
    if (sse == 0.0) {
      converged = true;
      break;
    }
    predict(params, resid);
    for (int i = 0; i < n; ++i) resid[i] -= samples[i].latency;
    for (int j = 0; j < p; ++j) {
      const double h = 6e-6 * std::max(1.0, std::abs(theta[j]));
      Eigen::VectorXd tp = theta, tm = theta;
      tp[j] += h;
      tm[j] -= h;
      predict(to_external(model, tp), plus);
      predict(to_external(model, tm), minus);
      jac.col(j) = (plus - minus) / (2.0 * h);
    }
    if (!jac.allFinite()) break;
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd grad = jac.transpose() * resid;
    if (grad.norm() == 0.0) {
      converged = true;
      break;
    }
    Eigen::VectorXd diag = jtj.diagonal();
    const double floor = 1e-12 * std::max(diag.maxCoeff(), 1e-300);
    for (int j = 0; j < p; ++j) diag[j] = std::max(diag[j], floor);

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal() += damping * diag;
      const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
      const Eigen::VectorXd candidate = theta + step;
      const LatencyParams cand_params = to_external(model, candidate);
      const double cand_sse = step.allFinite()
                                  ? sum_squared_error(model, cand_params, samples)
                                  : kInf;
      if (cand_sse < sse) {
        const double rel = (sse - cand_sse) / sse;
        const bool tiny_step =
            step.norm() <= options.step_tolerance * (theta.norm() + options.step_tolerance);
        if (rel < options.relative_sse_tolerance || tiny_step) {
          // Improvement below tolerance: stop at the current iterate.
          converged = true;
          break;
        }
        theta = candidate;
        params = cand_params;
        sse = cand_sse;
        damping = std::max(damping / 10.0, 1e-15);
        accepted = true;
      } else {
        damping *= 10.0;
        if (damping > 1e16) {
          converged = true;
          break;
        }
      }
    }
  }

  fit.params = canonicalize(model, params);
  fit.iterations = iter;
  fit.converged = converged;
  fill_metrics(fit, samples);
  return fit;
}

std::vector<FitResult> rank_models(std::span<const LatencySample> samples,
                                   const FitOptions& options) {
  std::vector<FitResult> fits;
  fits.reserve(kAllModels.size());
  for (ModelId m : kAllModels) fits.push_back(fit_model(samples, m, {}, options));
  std::stable_sort(fits.begin(), fits.end(), [](const FitResult& a, const FitResult& b) {
    if (a.converged != b.converged) return a.converged;
    if (a.rmse != b.rmse) return a.rmse < b.rmse;
    if (param_count(a.model) != param_count(b.model)) {
      return param_count(a.model) < param_count(b.model);
    }
    return static_cast<int>(a.model) < static_cast<int>(b.model);
  });
  return fits;
}

ResidualReport residual_report(std::span<const double> observed,
                               std::span<const double> predicted,
                               int param_count) {
  if (observed.size() != predicted.size() || observed.empty()) {
    throw InputError("observed/predicted size mismatch");
  }
  const std::size_t n = observed.size();
  ResidualReport report;
  report.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) report.residuals[i] = observed[i] - predicted[i];
  const double dn = static_cast<double>(n);
  report.mean =
      std::accumulate(report.residuals.begin(), report.residuals.end(), 0.0) / dn;
  double var = 0.0;
  for (double e : report.residuals) var += (e - report.mean) * (e - report.mean);
  const double sd = std::sqrt(var / dn);
  report.standardized.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    report.standardized[i] = sd > 0.0 ? (report.residuals[i] - report.mean) / sd : 0.0;
  }
  std::vector<double> sorted = report.residuals;
  std::sort(sorted.begin(), sorted.end());
  const boost::math::normal_distribution<double> normal;
  report.qq.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    report.qq[k] = {sorted[k], boost::math::quantile(normal, (k + 0.5) / dn)};
  }
  report.r_squared = coefficient_of_determination(observed, predicted);
  report.adj_r_squared = adjusted_r_squared(report.r_squared, n, param_count);
  return report;
}

ResidualReport residual_diagnostics(const FitResult& fit,
                                    std::span<const LatencySample> samples) {
  if (fit.residuals.size() != samples.size()) {
    throw InputError("fit has " + std::to_string(fit.residuals.size()) +
                     " residuals but " + std::to_string(samples.size()) +
                     " samples were given");
  }
  const std::size_t n = samples.size();
  std::vector<double> observed(n), predicted(n);
  for (std::size_t i = 0; i < n; ++i) {
    observed[i] = samples[i].latency;
    predicted[i] = eval_latency_unchecked(fit.model, fit.params, samples[i].r_cpu,
                                          samples[i].r_mem);
    const double recomputed = observed[i] - predicted[i];
    const Residual& stored = fit.residuals[i];
    if (stored.index != i ||
        std::abs(stored.value - recomputed) > 1e-9 * (std::abs(observed[i]) + 1.0)) {
      throw InputError("fit residual " + std::to_string(i) +
                       " does not match the given samples");
    }
  }
  return residual_report(observed, predicted, param_count(fit.model));
}

std::vector<LatencySample> generate_synthetic_profile(
    const LatencyParams& true_params, ModelId model,
    std::span<const double> cpu_grid, std::span<const double> mem_grid,
    double noise_rel, std::uint64_t seed) {
  if (cpu_grid.empty() || mem_grid.empty()) {
    throw InputError("resource grids must be non-empty");
  }
  if (!(noise_rel >= 0.0)) {
    throw InputError("noise_rel must be >= 0");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_rel > 0.0 ? noise_rel : 1.0);
  std::vector<LatencySample> out;
  out.reserve(cpu_grid.size() * mem_grid.size());
  for (double cpu : cpu_grid) {
    for (double mem : mem_grid) {
      const double clean = eval_latency(model, true_params, cpu, mem);
      double latency = clean;
      if (noise_rel > 0.0) {
        do {
          latency = clean * (1.0 + noise(rng));
        } while (!(latency > 0.0));
      }
      out.push_back({cpu, mem, latency});
    }
  }
  return out;
}

std::vector<LatencySample> read_samples_csv(std::istream& in,
                                            const std::string& source) {
  std::vector<LatencySample> out;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = text::trim(line);
    if (t.empty()) continue;
    if (!header_seen) {
      if (t != "r_cpu,r_mem_mb,latency_s") {
        throw ParseError(source, line_no,
                         "expected header 'r_cpu,r_mem_mb,latency_s'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = text::split(t, ',');
    if (fields.size() != 3) {
      throw ParseError(source, line_no, "expected 3 fields, got " +
                                            std::to_string(fields.size()));
    }
    static constexpr std::array<const char*, 3> kNames = {"r_cpu", "r_mem_mb",
                                                          "latency_s"};
    std::array<double, 3> v{};
    for (int k = 0; k < 3; ++k) {
      const auto parsed = text::parse_double(fields[k]);
      if (!parsed || !(*parsed > 0.0) || !std::isfinite(*parsed)) {
        throw ParseError(source, line_no,
                         std::string("field '") + kNames[k] +
                             "' must be a positive number, got '" + fields[k] + "'");
      }
      v[k] = *parsed;
    }
    out.push_back({v[0], v[1], v[2]});
  }
  if (!header_seen) throw ParseError(source, line_no, "empty sample file");
  return out;
}

void write_samples_csv(std::ostream& out, std::span<const LatencySample> samples) {
  out << "r_cpu,r_mem_mb,latency_s\n";
  for (const auto& s : samples) {
    out << text::format_double(s.r_cpu, 17) << ',' << text::format_double(s.r_mem, 17)
        << ',' << text::format_double(s.latency, 17) << '\n';
  }
}

void write_fit_report(std::ostream& out, const FitResult& fit,
                      std::size_t sample_count) {
  out << "schema = crms-fit/1\n";
  out << "model = " << model_name(fit.model) << '\n';
  out << "formula = " << model_formula(fit.model) << '\n';
  for (int i = 0; i < param_count(fit.model); ++i) {
    out << "kappa" << (i + 1) << " = " << text::format_double(fit.params[i], 17)
        << '\n';
  }
  out << "samples = " << sample_count << '\n';
  out << "rmse = " << text::format_double(fit.rmse) << '\n';
  out << "mse = " << text::format_double(fit.mse) << '\n';
  out << "r_squared = " << text::format_double(fit.r_squared) << '\n';
  out << "adj_r_squared = " << text::format_double(fit.adj_r_squared) << '\n';
  out << "converged = " << (fit.converged ? "true" : "false") << '\n';
}

FitResult read_fit_report(std::istream& in, const std::string& source) {
  std::map<std::string, std::pair<std::string, int>> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(source, line_no, "expected 'key = value'");
    }
    kv[std::string(text::trim(t.substr(0, eq)))] = {
        std::string(text::trim(t.substr(eq + 1))), line_no};
  }
  const auto require = [&](const std::string& key) -> const std::pair<std::string, int>& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(source, line_no, "missing key '" + key + "'");
    return it->second;
  };
  const auto number = [&](const std::string& key) {
    const auto& [value, at] = require(key);
    const auto v = text::parse_double(value);
    if (!v) throw ParseError(source, at, "key '" + key + "' is not a number");
    return *v;
  };
  FitResult fit;
  const auto& [model_text, model_line] = require("model");
  const auto model = parse_model(model_text);
  if (!model) throw ParseError(source, model_line, "unknown model '" + model_text + "'");
  fit.model = *model;
  for (int i = 0; i < param_count(fit.model); ++i) {
    fit.params[i] = number("kappa" + std::to_string(i + 1));
  }
  if (kv.count("rmse")) fit.rmse = number("rmse");
  if (kv.count("mse")) fit.mse = number("mse");
  if (kv.count("r_squared")) fit.r_squared = number("r_squared");
  if (kv.count("adj_r_squared")) fit.adj_r_squared = number("adj_r_squared");
  if (kv.count("converged")) fit.converged = require("converged").first == "true";
  return fit;
}

}  // namespace crms
