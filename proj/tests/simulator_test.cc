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

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "crms/errors.h"
#include "crms/model_fit.h"
#include "crms/optimizer.h"
#include "oracles.h"
#include "test_scenarios.h"

namespace crms {
namespace {

// One app whose service rate is exactly mu at the config {n, 1 core, r_max}.
SimConfig queue_config(int n, double lambda, double mu, std::size_t measured,
                       std::uint64_t seed = 1) {
  AppProfile p = testing::make_app("q", -100.0, 1.0, 500.0, 200.0, 400.0, lambda, 1.0);
  p.mean_images = 1.0 / (mu * 1e-3 * eval_latency(ModelId::kM1, p.latency, 1.0, 400.0));
  SimConfig c;
  c.profiles = {p};
  c.configs = {{n, 1.0, 400.0}};
  c.measured_requests = measured;
  c.seed = seed;
  return c;
}

TEST(SimulatorTest, MM1ResponseTime) {
  const SimConfig c = queue_config(1, 1.0, 2.0, 100000);
  const SimReport r = simulate(c);
  const SimAppReport& a = r.apps[0];
  EXPECT_NEAR(a.mean_response_time, oracle::mm1_response_time(1.0, 2.0), 0.03);
  EXPECT_EQ(a.completed, 100000u);
  EXPECT_FALSE(a.unstable);
  EXPECT_NEAR(a.utilization, 0.5, 0.02);
  EXPECT_NEAR(a.mean_in_system, oracle::mm1_in_system(1.0, 2.0), 0.05);
  const DeviationReport d = compare_to_analytic(r, c.configs, c.profiles);
  EXPECT_LE(d.apps[0].rel_err, 0.03);
  EXPECT_EQ(d.apps[0].status, "pass");
  EXPECT_TRUE(d.passed);
}

TEST(SimulatorTest, SameSeedSameReport) {
  const SimConfig c = queue_config(2, 3.0, 2.0, 20000, 9);
  EXPECT_EQ(simulate(c), simulate(c));
  SimConfig other = c;
  other.seed = 10;
  EXPECT_NE(simulate(c).apps[0].mean_response_time, simulate(other).apps[0].mean_response_time);
}

TEST(SimulatorTest, StreamsArePerApp) {
  // Adding a second app must not change the first app's sample path.
  const SimConfig one = queue_config(2, 3.0, 2.0, 20000, 4);
  SimConfig two = one;
  const SimConfig extra = queue_config(3, 5.0, 2.0, 20000, 4);
  two.profiles.push_back(extra.profiles[0]);
  two.profiles[1].name = "other";
  two.configs.push_back(extra.configs[0]);
  const SimReport a = simulate(one);
  const SimReport b = simulate(two);
  EXPECT_EQ(a.apps[0].mean_response_time, b.apps[0].mean_response_time);
  EXPECT_EQ(a.apps[0].horizon, b.apps[0].horizon);
}

TEST(SimulatorTest, OverloadIsFlaggedAndGrows) {
  const SimReport shorter = simulate(queue_config(1, 1.2, 1.0, 20000));
  const SimReport longer = simulate(queue_config(1, 1.2, 1.0, 80000));
  EXPECT_TRUE(shorter.apps[0].unstable);
  EXPECT_GT(longer.apps[0].mean_in_system, 2.0 * shorter.apps[0].mean_in_system);
  const SimConfig c = queue_config(1, 1.2, 1.0, 20000);
  const DeviationReport d = compare_to_analytic(shorter, c.configs, c.profiles);
  EXPECT_EQ(d.apps[0].status, "not_compared");
  EXPECT_TRUE(d.passed);
}

TEST(SimulatorTest, LittlesLawAndFlowConservation) {
  for (int n : {1, 3, 8}) {
    const SimReport r = simulate(queue_config(n, 0.85 * n * 2.0, 2.0, 100000, n));
    const SimAppReport& a = r.apps[0];
    EXPECT_LE(a.little_residual, 0.02) << "n=" << n;
    EXPECT_EQ(a.arrivals, a.departures + a.in_system_at_end);
    EXPECT_LE(a.completed, a.arrivals);
    EXPECT_GE(a.utilization, 0.0);
    EXPECT_LE(a.utilization, 1.0);
    const oracle::ErlangC e = oracle::erlang_c(n, 0.85 * n * 2.0, 2.0);
    EXPECT_NEAR(a.mean_response_time, e.w_s, 3.0 * a.ci_half_width) << "n=" << n;
    EXPECT_LE(a.ci_half_width, 0.15 * e.w_s);
  }
}

TEST(SimulatorTest, LightLoadSeesOnlyServiceTime) {
  const SimReport r = simulate(queue_config(1, 0.01, 10.0, 20000));
  const SimAppReport& a = r.apps[0];
  EXPECT_NEAR(a.mean_response_time, 0.1, 2.0 * a.ci_half_width);
  EXPECT_NEAR(a.mean_response_time, 0.1, 0.005);
}

TEST(SimulatorTest, ConfidenceIntervalShrinksWithSamples) {
  double small = 0.0, large = 0.0;
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    small += simulate(queue_config(2, 3.0, 2.0, 40000, seed)).apps[0].ci_half_width;
    large += simulate(queue_config(2, 3.0, 2.0, 80000, seed + 100)).apps[0].ci_half_width;
  }
  EXPECT_NEAR(large / small, 1.0 / std::sqrt(2.0), 0.2 / std::sqrt(2.0));
}

TEST(SimulatorTest, PlannedAllocationMatchesAnalytic) {
  const Scenario s = testing::inference_scenario(8, 7, 10, 15);
  const CrmsResult plan = crms_plan(s.apps, s.server, s.weights);
  SimConfig c;
  c.profiles = s.apps;
  c.configs = plan.allocation.configs();
  c.measured_requests = 100000;
  const SimReport r = simulate(c);
  const DeviationReport d = compare_to_analytic(r, c.configs, c.profiles);
  EXPECT_TRUE(d.passed);
  for (const SimAppReport& a : r.apps) EXPECT_LE(a.little_residual, 0.02) << a.name;
}

TEST(SimulatorTest, InputErrorsAndCsv) {
  SimConfig c = queue_config(1, 1.0, 2.0, 0);
  EXPECT_THROW(simulate(c), InputError);
  c.measured_requests = 1000;
  c.configs.clear();
  EXPECT_THROW(simulate(c), InputError);
  c = queue_config(1, 1.0, 2.0, 1000);
  const SimReport r = simulate(c);
  std::stringstream out;
  write_sim_csv(out, r, compare_to_analytic(r, c.configs, c.profiles), true);
  std::string header, row;
  std::getline(out, header);
  std::getline(out, row);
  EXPECT_EQ(header, std::string(kSimHeader) + ",status");
  EXPECT_EQ(row.rfind("q,", 0), 0u);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 9);
}

}  // namespace
}  // namespace crms
