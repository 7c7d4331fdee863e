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

// Latency-resource models for a single containerized application.
//
// Five candidate forms relate the mean per-image processing delay d to the
// CPU quota r (cores) and memory limit m (MB):
//
//   M1  d = k1 / (1 - exp(k2 r)) + exp(k3 / m)     k1 < 0, k2 > 0, k3 > 0
//   M2  d = k1 / r + k2 m^2 + k3 m
//   M3  d = 1 / (k1 log(1 + r) + k2 log(1 + m))
//   M4  d = k1 / (k2 + k3 r^2 + k4 m^2)
//   M5  d = k1 r^3 + k2 m^3 + k3 r m
//
// M1 is the adopted model. Its sign constraints make it positive, strictly
// decreasing and convex in both resources. Fitting is a damped Gauss-Newton
// (Levenberg-Marquardt) iteration on a central-differenced Jacobian; M1's
// coefficients are optimized in log-magnitude space so the signs hold at every
// iterate.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crms {

struct LatencySample {
  double r_cpu = 0.0;    // cores
  double r_mem = 0.0;    // MB
  double latency = 0.0;  // seconds (or the dataset's own time unit)
};

enum class ModelId { kM1 = 0, kM2, kM3, kM4, kM5 };

inline constexpr std::array<ModelId, 5> kAllModels = {
    ModelId::kM1, ModelId::kM2, ModelId::kM3, ModelId::kM4, ModelId::kM5};

// Number of coefficients the model uses (2 for M3, 4 for M4, 3 otherwise).
int param_count(ModelId model);
std::string_view model_name(ModelId model);
std::string_view model_formula(ModelId model);
std::optional<ModelId> parse_model(std::string_view name);

struct LatencyParams {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double kappa3 = 0.0;
  double kappa4 = 0.0;  // M4 only

  double operator[](int i) const;
  double& operator[](int i);
  bool operator==(const LatencyParams&) const = default;
};

// Throws ParameterError when an M1 coefficient has the wrong sign or any
// coefficient is not finite.
void validate_params(ModelId model, const LatencyParams& params);

// Predicted per-image delay. Throws DomainError for non-positive resources and
// ParameterError on sign-constraint violations.
double eval_latency(ModelId model, const LatencyParams& params, double r_cpu,
                    double r_mem);

// Same as eval_latency without argument checks; used in inner loops.
double eval_latency_unchecked(ModelId model, const LatencyParams& params,
                              double r_cpu, double r_mem);

struct Residual {
  std::size_t index = 0;
  double value = 0.0;  // observed - predicted
};

struct FitResult {
  ModelId model = ModelId::kM1;
  LatencyParams params;
  double rmse = 0.0;
  double mse = 0.0;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  std::vector<Residual> residuals;
  int iterations = 0;
  bool converged = false;
};

struct FitOptions {
  int max_iterations = 500;
  double relative_sse_tolerance = 1e-12;
  double step_tolerance = 1e-10;
};

// Least-squares fit of `model` to `samples`. Requires at least
// param_count(model) + 1 samples (InputError) and at least two distinct
// resource points (ConditioningError). Non-convergence is reported through
// FitResult::converged, not thrown.
FitResult fit_model(std::span<const LatencySample> samples, ModelId model,
                    const std::optional<LatencyParams>& initial_guess = {},
                    const FitOptions& options = {});

// Fits all five models and orders them: converged before non-converged, then
// ascending RMSE, then fewer parameters, then model order.
std::vector<FitResult> rank_models(std::span<const LatencySample> samples,
                                   const FitOptions& options = {});

// 1 - SSE/SST. Throws ConditioningError when SST is zero.
double coefficient_of_determination(std::span<const double> observed,
                                    std::span<const double> predicted);

// 1 - (SSE / (n - p)) / (SST / (n - 1)); requires n > p.
double adjusted_r_squared(double r_squared, std::size_t n, int p);

struct QqPoint {
  double sample = 0.0;       // k-th smallest residual
  double theoretical = 0.0;  // standard normal quantile at (k - 0.5) / n
};

struct ResidualReport {
  std::vector<double> residuals;     // by sample index
  std::vector<double> standardized;  // (e - mean) / population std
  std::vector<QqPoint> qq;           // ascending order statistics
  double mean = 0.0;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
};

// Diagnostics from raw residuals; R-squared terms use `observed`.
ResidualReport residual_report(std::span<const double> observed,
                               std::span<const double> predicted,
                               int param_count);

// Diagnostics for a fit. Throws InputError if the fit was not produced from
// these samples.
ResidualReport residual_diagnostics(const FitResult& fit,
                                    std::span<const LatencySample> samples);

// One sample per (cpu, mem) grid point with latency
// eval_latency * (1 + eps), eps ~ Normal(0, noise_rel) redrawn until the
// latency is positive. Deterministic in `seed`.
std::vector<LatencySample> generate_synthetic_profile(
    const LatencyParams& true_params, ModelId model,
    std::span<const double> cpu_grid, std::span<const double> mem_grid,
    double noise_rel, std::uint64_t seed);

// Measurement CSV: header `r_cpu,r_mem_mb,latency_s`.
std::vector<LatencySample> read_samples_csv(std::istream& in,
                                            const std::string& source);
void write_samples_csv(std::ostream& out,
                       std::span<const LatencySample> samples);

// Flat `key = value` report (schema crms-fit/1). Iteration counts are not
// part of the document so a refit from its own parameters reproduces it.
void write_fit_report(std::ostream& out, const FitResult& fit,
                      std::size_t sample_count);
FitResult read_fit_report(std::istream& in, const std::string& source);

}  // namespace crms
