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

#include "crms/scenario_io.h"

#include <gtest/gtest.h>

#include <sstream>

#include "crms/errors.h"
#include "test_scenarios.h"

namespace crms {
namespace {

constexpr const char* kText = R"(# two apps
server {
  cpu_total = 30
  mem_total = 10GB
  p_idle = 60
  p_full = 160
}
weights {
  alpha = 1.4
  beta = 0.2
}
app {
  name = resnet_v2
  kappa1 = -500
  kappa2 = 1.0
  kappa3 = 1200   # ms scale
  latency_unit = ms
  r_min = 200MB
  r_max = 400
  lambda = 8
  x_mean = 5
}
app {
  name = other
  kappa1 = -0.5
  kappa2 = 1.0
  kappa3 = 0.1
  r_min = 0.25GB
  r_max = 512
  lambda = 2
  x_mean = 1
}
)";

int error_line(const std::string& text) {
  std::stringstream ss(text);
  try {
    parse_scenario(ss, "t.scn");
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

TEST(ScenarioIoTest, ParsesDocumentedFormat) {
  std::stringstream ss(kText);
  const Scenario s = parse_scenario(ss, "t.scn");
  EXPECT_EQ(s.server.mem_total, 10240.0);
  EXPECT_EQ(s.weights.alpha, 1.4);
  ASSERT_EQ(s.apps.size(), 2u);
  EXPECT_EQ(s.apps[0].unit, LatencyUnit::kMilliseconds);
  EXPECT_EQ(s.apps[1].unit, LatencyUnit::kSeconds);
  EXPECT_EQ(s.apps[1].r_min, 256.0);
  EXPECT_EQ(s.apps[0].latency.kappa3, 1200.0);
}

TEST(ScenarioIoTest, WriteParseRoundTrip) {
  const Scenario s = testing::inference_scenario(8, 7, 10, 15);
  std::stringstream out;
  write_scenario(out, s);
  std::stringstream in(out.str());
  const Scenario back = parse_scenario(in, "rt");
  ASSERT_EQ(back.apps.size(), s.apps.size());
  for (std::size_t i = 0; i < s.apps.size(); ++i) {
    EXPECT_EQ(back.apps[i].name, s.apps[i].name);
    EXPECT_EQ(back.apps[i].latency, s.apps[i].latency);
    EXPECT_EQ(back.apps[i].r_max, s.apps[i].r_max);
    EXPECT_EQ(back.apps[i].arrival_rate, s.apps[i].arrival_rate);
  }
  EXPECT_EQ(back.server.cpu_total, s.server.cpu_total);
}

TEST(ScenarioIoTest, ErrorsCiteLines) {
  std::string t = kText;
  EXPECT_EQ(error_line(std::string(t).replace(t.find("p_idle = 60"), 11, "p_idle = x")), 5);
  EXPECT_EQ(error_line(std::string(t).replace(t.find("beta = 0.2"), 10, "gamma = 1")), 10);
  EXPECT_EQ(error_line(std::string(t).replace(t.find("alpha = 1.4"), 11, "beta = 1.4")), 10);
  EXPECT_EQ(error_line(std::string(t).replace(t.find("latency_unit = ms"), 17,
                                              "latency_unit = us")),
            17);
  EXPECT_EQ(error_line("server {\n cpu_total = 1\n"), 1);
  EXPECT_GT(error_line("weights {\nalpha = 1\nbeta = 0\n}\n"), -1);
}

TEST(ScenarioIoTest, PlanRoundTripAndMatching) {
  const Scenario s = testing::two_app_scenario(30.0, 4096.0);
  const std::vector<ClusterConfig> cfgs = {{3, 1.5, 350.0}, {2, 2.0, 300.0}};
  const Allocation alloc = system_utility(cfgs, s);
  std::stringstream out;
  write_plan_csv(out, alloc);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), kPlanHeader);
  std::stringstream in(out.str());
  auto rows = read_plan_csv(in, "plan.csv");
  std::swap(rows[0], rows[1]);
  EXPECT_EQ(match_plan(rows, s), cfgs);

  rows.pop_back();
  EXPECT_THROW(match_plan(rows, s), InputError);
  EXPECT_THROW(match_plan({}, s), InputError);
  std::stringstream bad("app,N,r_cpu,r_mem_mb\nb,x,1,200\n");
  EXPECT_THROW(read_plan_csv(bad, "bad"), ParseError);
}

}  // namespace
}  // namespace crms
