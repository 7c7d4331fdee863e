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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "crms/errors.h"

namespace crms {
namespace {

const std::vector<double> kCpu = {0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
const std::vector<double> kMem = {200.0, 240.0, 280.0, 320.0, 360.0, 400.0};
const LatencyParams kTrue{-500.0, 1.0, 1200.0, 0.0};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(ModelFitTest, ParamCountsAndNames) {
  EXPECT_EQ(param_count(ModelId::kM1), 3);
  EXPECT_EQ(param_count(ModelId::kM3), 2);
  EXPECT_EQ(param_count(ModelId::kM4), 4);
  for (ModelId m : kAllModels) {
    EXPECT_EQ(parse_model(model_name(m)), m);
  }
  EXPECT_FALSE(parse_model("M9").has_value());
}

TEST(ModelFitTest, EvalMatchesHandComputation) {
  const LatencyParams p{-5.0, 1.0, 100.0, 0.0};
  const double expected = -5.0 / (1.0 - std::exp(2.0)) + std::exp(100.0 / 300.0);
  EXPECT_NEAR(eval_latency(ModelId::kM1, p, 2.0, 300.0), expected, 1e-14);
  EXPECT_DOUBLE_EQ(eval_latency(ModelId::kM2, {2.0, 1e-6, 1e-3, 0}, 2.0, 100.0),
                   1.0 + 1e-2 + 0.1);
  EXPECT_DOUBLE_EQ(eval_latency(ModelId::kM3, {1.0, 1.0, 0, 0}, std::exp(1.0) - 1, std::exp(1.0) - 1),
                   0.5);
}

TEST(ModelFitTest, EvalRejectsBadInput) {
  EXPECT_THROW(eval_latency(ModelId::kM1, kTrue, 0.0, 300.0), DomainError);
  EXPECT_THROW(eval_latency(ModelId::kM1, kTrue, 1.0, -1.0), DomainError);
  EXPECT_THROW(eval_latency(ModelId::kM1, {5.0, 1.0, 1.0, 0}, 1.0, 300.0), ParameterError);
}

TEST(ModelFitTest, M1IsDecreasingAndConvex) {
  const double h = 1e-2;
  for (double r : kCpu) {
    for (double m : kMem) {
      const auto f = [&](double x, double y) { return eval_latency(ModelId::kM1, kTrue, x, y); };
      EXPECT_LT(f(r + h, m), f(r, m));
      EXPECT_LT(f(r, m + h), f(r, m));
      EXPECT_GE(f(r + h, m) - 2 * f(r, m) + f(r - h, m), -1e-8);
      EXPECT_GE(f(r, m + h) - 2 * f(r, m) + f(r, m - h), -1e-8);
    }
  }
}

TEST(ModelFitTest, RecoversNoiselessM1) {
  const auto samples = generate_synthetic_profile(kTrue, ModelId::kM1, kCpu, kMem, 0.0, 1);
  const FitResult fit = fit_model(samples, ModelId::kM1);
  EXPECT_TRUE(fit.converged);
  for (int i = 0; i < 3; ++i) EXPECT_LT(rel(fit.params[i], kTrue[i]), 1e-6) << i;
  EXPECT_GT(fit.r_squared, 1.0 - 1e-12);
}

TEST(ModelFitTest, RecoversNoisyM1) {
  const auto samples = generate_synthetic_profile(kTrue, ModelId::kM1, kCpu, kMem, 0.01, 7);
  const FitResult fit = fit_model(samples, ModelId::kM1);
  for (int i = 0; i < 3; ++i) EXPECT_LT(rel(fit.params[i], kTrue[i]), 0.03) << i;
  EXPECT_GE(fit.r_squared, 0.999);
}

TEST(ModelFitTest, RecoversLinearModelsExactly) {
  const LatencyParams m2{3.0, 1e-5, 2e-3, 0.0};
  const auto samples = generate_synthetic_profile(m2, ModelId::kM2, kCpu, kMem, 0.0, 1);
  const FitResult fit = fit_model(samples, ModelId::kM2);
  for (int i = 0; i < 3; ++i) EXPECT_LT(rel(fit.params[i], m2[i]), 1e-8);

  const LatencyParams m4{1.0, 0.5, 0.2, 1e-5, };
  const auto s4 = generate_synthetic_profile(m4, ModelId::kM4, kCpu, kMem, 0.0, 1);
  const FitResult f4 = fit_model(s4, ModelId::kM4);
  for (int i = 0; i < 4; ++i) EXPECT_LT(rel(f4.params[i], m4[i]), 1e-6) << i;
}

TEST(ModelFitTest, RanksM1FirstOnM1Data) {
  const auto samples = generate_synthetic_profile(kTrue, ModelId::kM1, kCpu, kMem, 0.01, 3);
  const auto ranked = rank_models(samples);
  ASSERT_EQ(ranked.size(), 5u);
  EXPECT_EQ(ranked.front().model, ModelId::kM1);
  for (std::size_t i = 1; i < ranked.size(); ++i) {
    if (ranked[i].converged == ranked[i - 1].converged) {
      EXPECT_LE(ranked[i - 1].rmse, ranked[i].rmse);
    }
  }
}

TEST(ModelFitTest, RejectsDegenerateData) {
  std::vector<LatencySample> two = {{1, 300, 1.0}, {2, 300, 0.5}};
  EXPECT_THROW(fit_model(two, ModelId::kM1), InputError);
  std::vector<LatencySample> same(6, LatencySample{1.0, 300.0, 1.0});
  same[1].latency = 2.0;
  EXPECT_THROW(fit_model(same, ModelId::kM1), ConditioningError);
  std::vector<LatencySample> flat;
  for (double r : kCpu) flat.push_back({r, 300.0, 1.0});
  EXPECT_THROW(fit_model(flat, ModelId::kM1), ConditioningError);
}

TEST(ModelFitTest, StatisticsMatchDefinitions) {
  const std::vector<double> y = {1, 2, 3, 4, 5};
  const std::vector<double> yhat = {1.1, 1.9, 3.2, 3.8, 5.0};
  const double sse = 0.01 + 0.01 + 0.04 + 0.04;
  const double sst = 10.0;
  EXPECT_NEAR(coefficient_of_determination(y, yhat), 1 - sse / sst, 1e-14);
  EXPECT_NEAR(adjusted_r_squared(1 - sse / sst, 5, 2), 1 - (sse / 3) / (sst / 4), 1e-14);
  const std::vector<double> c = {2, 2, 2};
  EXPECT_THROW(coefficient_of_determination(c, c), ConditioningError);
}

TEST(ModelFitTest, ResidualReportIsConsistent) {
  const auto samples = generate_synthetic_profile(kTrue, ModelId::kM1, kCpu, kMem, 0.02, 11);
  const FitResult fit = fit_model(samples, ModelId::kM1);
  const ResidualReport rep = residual_diagnostics(fit, samples);
  ASSERT_EQ(rep.qq.size(), samples.size());
  for (std::size_t k = 1; k < rep.qq.size(); ++k) {
    EXPECT_LE(rep.qq[k - 1].sample, rep.qq[k].sample);
    EXPECT_LT(rep.qq[k - 1].theoretical, rep.qq[k].theoretical);
  }
  EXPECT_NEAR(rep.qq.front().theoretical, -rep.qq.back().theoretical, 1e-12);
  double sum = 0, sq = 0;
  for (double z : rep.standardized) {
    sum += z;
    sq += z * z;
  }
  EXPECT_NEAR(sum / rep.standardized.size(), 0.0, 1e-10);
  EXPECT_NEAR(sq / rep.standardized.size(), 1.0, 1e-10);
  EXPECT_NEAR(rep.adj_r_squared, fit.adj_r_squared, 1e-12);
}

TEST(ModelFitTest, SamplesCsvRoundTrip) {
  const auto samples = generate_synthetic_profile(kTrue, ModelId::kM1, kCpu, kMem, 0.01, 5);
  std::stringstream ss;
  write_samples_csv(ss, samples);
  const auto back = read_samples_csv(ss, "mem");
  ASSERT_EQ(back.size(), samples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].r_cpu, samples[i].r_cpu);
    EXPECT_EQ(back[i].r_mem, samples[i].r_mem);
    EXPECT_EQ(back[i].latency, samples[i].latency);
  }
  std::stringstream bad("r_cpu,r_mem_mb,latency_s\n1,2,x\n");
  try {
    read_samples_csv(bad, "bad.csv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(ModelFitTest, RefitFromReportIsIdempotent) {
  const auto samples = generate_synthetic_profile(kTrue, ModelId::kM1, kCpu, kMem, 0.01, 9);
  const FitResult first = fit_model(samples, ModelId::kM1);
  std::stringstream a;
  write_fit_report(a, first, samples.size());
  std::stringstream in(a.str());
  const FitResult parsed = read_fit_report(in, "report");
  const FitResult second = fit_model(samples, ModelId::kM1, parsed.params);
  std::stringstream b;
  write_fit_report(b, second, samples.size());
  EXPECT_EQ(a.str(), b.str());
}

TEST(ModelFitTest, GeneratorIsDeterministicAndPositive) {
  const auto a = generate_synthetic_profile(kTrue, ModelId::kM1, kCpu, kMem, 0.5, 42);
  const auto b = generate_synthetic_profile(kTrue, ModelId::kM1, kCpu, kMem, 0.5, 42);
  ASSERT_EQ(a.size(), 36u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].latency, b[i].latency);
    EXPECT_GT(a[i].latency, 0.0);
  }
  EXPECT_THROW(generate_synthetic_profile(kTrue, ModelId::kM1, {}, kMem, 0.0, 1), InputError);
}

}  // namespace
}  // namespace crms
