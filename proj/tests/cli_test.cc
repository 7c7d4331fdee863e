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

// Integration tests that run the crms binary.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "crms/optimizer.h"
#include "crms/scenario_io.h"
#include "text_util.h"

namespace crms {
namespace {

namespace fs = std::filesystem;

const std::string kTool = CRMS_TOOL_PATH;
const std::string kScenarios = CRMS_SCENARIO_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("crms_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the tool with `args`; stdout and stderr go to dir_/log.txt.
  int run(const std::string& args) {
    const std::string cmd = kTool + " " + args + " > " + (dir_ / "log.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }
  std::string scenario(const std::string& name) const { return kScenarios + "/" + name; }

  fs::path dir_;
};

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(text::split(line, ','));
  }
  return rows;
}

TEST_F(CliTest, VersionAndUsage) {
  EXPECT_EQ(run("--version"), 0);
  EXPECT_NE(read("log.txt").find("crms 1.0.0"), std::string::npos);
  EXPECT_NE(read("log.txt").find("plan-csv 1"), std::string::npos);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("optimize --bogus"), 2);
  EXPECT_EQ(run("optimize"), 2);
}

TEST_F(CliTest, ScenarioParseErrorCitesLine) {
  write("bad.scn", "server {\n  cpu_total = 30\n  speed = 3\n}\n");
  EXPECT_EQ(run("optimize --scenario " + path("bad.scn") + " --out " + path("o")), 2);
  EXPECT_NE(read("log.txt").find(":3"), std::string::npos) << read("log.txt");
  EXPECT_EQ(run("optimize --scenario " + path("missing.scn")), 5);
}

TEST_F(CliTest, OptimizeWritesAReadablePlan) {
  const std::string scn = scenario("constrained.scn");
  ASSERT_EQ(run("optimize --scenario " + scn + " --out " + path("o")), 0);
  const Scenario s = load_scenario(scn);
  std::ifstream in(path("o/plan.csv"));
  const auto cfgs = match_plan(read_plan_csv(in, "plan.csv"), s);
  const CrmsResult direct = crms_plan(s.apps, s.server, s.weights);
  EXPECT_EQ(cfgs, direct.allocation.configs());
  EXPECT_EQ(read("o/plan.csv").substr(0, std::string(kPlanHeader).size()), kPlanHeader);
  EXPECT_NE(read("o/summary.txt").find("feasible=true"), std::string::npos);
  EXPECT_NE(read("o/trace.txt").find("accepted=0"), std::string::npos);
}

TEST_F(CliTest, InfeasibleBaselinesExitWithThree) {
  const std::string scn = scenario("constrained.scn");
  EXPECT_EQ(run("optimize --method snfc1 --scenario " + scn + " --out " + path("a")), 3);
  EXPECT_NE(read("log.txt").find("binding="), std::string::npos);
  EXPECT_EQ(run("optimize --method snfc2 --scenario " + scn + " --out " + path("b")), 3);
  EXPECT_NE(read("b/plan.csv").find(",stable"), std::string::npos);
  EXPECT_EQ(run("optimize --method drf --scenario " + scenario("heavy_app.scn") + " --out " +
                path("c")),
            3);
  EXPECT_NE(read("c/plan.csv").find(",false"), std::string::npos);
  EXPECT_EQ(run("optimize --method nope --scenario " + scn), 5);
}

TEST_F(CliTest, RandomSearchIsReproducible) {
  const std::string args = "optimize --method rs --budget 2000 --seed 1 --scenario " +
                           scenario("sufficient.scn") + " --out ";
  ASSERT_EQ(run(args + path("a")), 0);
  ASSERT_EQ(run(args + path("b") + " --jobs 1"), 0);
  EXPECT_EQ(read("a/plan.csv"), read("b/plan.csv"));
}

TEST_F(CliTest, SingletonGridEchoesItsPoint) {
  write("grid.csv",
        "app,n_min,n_max,r_cpu,r_mem\n"
        "resnet_v2,2,2,2.5,400\nse_resnext,2,2,3,400\n"
        "mobilenet_v2,2,2,1.5,350\nssd_mobilenet_v1,3,3,2,700\n");
  ASSERT_EQ(run("optimize --method brute --grid-file " + path("grid.csv") + " --scenario " +
                scenario("sufficient.scn") + " --out " + path("o")),
            0);
  const auto rows = csv_rows(read("o/plan.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[4][0], "ssd_mobilenet_v1");
  EXPECT_EQ(rows[4][1], "3");
  EXPECT_EQ(rows[4][2], "2");
  EXPECT_EQ(rows[4][3], "700");
  write("big.csv",
        "app,n_min,n_max,r_cpu,r_mem\nresnet_v2,1,3,1,400\n");
  EXPECT_EQ(run("optimize --method brute --grid-file " + path("big.csv") + " --scenario " +
                scenario("sufficient.scn")),
            2);
}

TEST_F(CliTest, ValidateExitCodes) {
  const std::string scn = scenario("sufficient.scn");
  ASSERT_EQ(run("optimize --scenario " + scn + " --out " + path("o")), 0);
  const std::string sim = " --scenario " + scn + " --plan " + path("o/plan.csv") +
                          " --out " + path("v");
  EXPECT_EQ(run("validate" + sim), 0);
  const auto rows = csv_rows(read("v/validate.csv"));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].back(), "status");
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_EQ(rows[k].back(), "pass");
  EXPECT_EQ(run("validate" + sim + " --threshold 1e-9"), 4);
  EXPECT_EQ(run("simulate" + sim), 0);
  EXPECT_EQ(csv_rows(read("v/sim.csv"))[0].size(), 9u);

  std::string plan = read("o/plan.csv");
  write("unstable.csv", "app,N,r_cpu,r_mem_mb\nresnet_v2,1,0.5,400\nse_resnext,2,3,400\n"
                        "mobilenet_v2,2,2,350\nssd_mobilenet_v1,3,3,700\n");
  EXPECT_EQ(run("validate --scenario " + scn + " --plan " + path("unstable.csv") +
                " --requests 5000 --out " + path("u")),
            0);
  EXPECT_NE(read("u/validate.csv").find("not_compared"), std::string::npos);
  EXPECT_NE(read("log.txt").find("unstable"), std::string::npos);

  write("empty.csv", "app,N,r_cpu,r_mem_mb\n");
  EXPECT_EQ(run("validate --scenario " + scn + " --plan " + path("empty.csv")), 5);
}

TEST_F(CliTest, SinglePointSweepMatchesOptimize) {
  const std::string scn = scenario("constrained.scn");
  ASSERT_EQ(run("optimize --scenario " + scn + " --out " + path("o")), 0);
  ASSERT_EQ(run("sweep --param beta --range 0.2 --scenario " + scn + " --out " + path("s")), 0);
  const auto plan = csv_rows(read("o/plan.csv"));
  const auto sweep = csv_rows(read("s/sweep.csv"));
  ASSERT_EQ(sweep.size(), plan.size());
  for (std::size_t k = 1; k < plan.size(); ++k) {
    // app, N, r_cpu, r_mem_mb, mu, rho, Ws_s, dP_w, utility_share
    for (std::size_t j = 0; j < plan[k].size(); ++j) EXPECT_EQ(sweep[k][4 + j], plan[k][j]);
    EXPECT_EQ(sweep[k].back(), "true");
  }
}

TEST_F(CliTest, SweepKeepsInfeasiblePointsAndOrder) {
  const std::string scn = scenario("constrained.scn");
  ASSERT_EQ(run("sweep --param cpu_total --range 2:30:14 --inner-param beta --inner-range "
                "0.1:0.3:0.1 --jobs 2 --scenario " + scn + " --out " + path("s")),
            0);
  const auto rows = csv_rows(read("s/sweep.csv"));
  ASSERT_EQ(rows.size(), 1u + 3 * 3 * 4);
  EXPECT_EQ(rows[0].size(), 15u);
  EXPECT_EQ(rows[1][1], "2");
  EXPECT_EQ(rows[1].back(), "false");
  EXPECT_EQ(rows[1][13], "inf");
  EXPECT_EQ(rows.back()[1], "30");
  EXPECT_EQ(rows.back().back(), "true");
  for (std::size_t k = 1; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k][0], "cpu_total");
    EXPECT_EQ(rows[k][2], "beta");
  }
  EXPECT_EQ(run("sweep --param cpu_total --range 30:2:1 --scenario " + scn), 5);
  EXPECT_EQ(run("sweep --param beta --range 0.1 --app resnet_v2 --scenario " + scn), 5);
  EXPECT_EQ(run("sweep --param gamma --range 1 --scenario " + scn), 5);
}

TEST_F(CliTest, SynthFitRoundTrip) {
  ASSERT_EQ(run("synth --kappa=-150,1.0,1200 --latency-unit ms --cpu-grid 0.5:3:0.5 "
                "--mem-grid 200:400:40 --noise 0.01 --seed 3 --out " + path("d")),
            0);
  ASSERT_EQ(run("fit --samples " + path("d/samples.csv") + " --latency-unit ms --out " +
                path("f")),
            0);
  const auto ranking = csv_rows(read("f/ranking.csv"));
  ASSERT_EQ(ranking.size(), 6u);
  EXPECT_EQ(ranking[1][1], "M1");
  const auto diag = csv_rows(read("f/diagnostics.csv"));
  EXPECT_EQ(diag.size(), 1u + 5 * 36);

  ASSERT_EQ(run("fit --model M1 --samples " + path("d/samples.csv") +
                " --latency-unit ms --init " + path("f/fit_M1.txt") + " --out " + path("g")),
            0);
  EXPECT_EQ(read("g/fit_M1.txt"), read("f/fit_M1.txt"));

  write("two.csv", "r_cpu,r_mem_mb,latency_s\n1,200,0.5\n2,300,0.3\n");
  EXPECT_EQ(run("fit --samples " + path("two.csv") + " --out " + path("h")), 5);
}

}  // namespace
}  // namespace crms
