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

// Serial against OpenMP timings for the parallel kernels. Arg(0) is the
// serial path, Arg(1) the parallel one.

#include <benchmark/benchmark.h>

#include <optional>
#include <string>
#include <vector>

#include "crms/baselines.h"
#include "crms/errors.h"
#include "crms/optimizer.h"
#include "crms/scenario_io.h"
#include "methods.h"

namespace {

const crms::Scenario& constrained() {
  static const crms::Scenario s = crms::load_scenario(CRMS_SCENARIO_DIR "/constrained.scn");
  return s;
}

// Unstable per-app points are dropped before enumeration, so the grid runs
// at a light load where nearly all of them survive.
const crms::Scenario& light() {
  static const crms::Scenario s = crms::cli::apply_axis(
      constrained(), crms::cli::parse_axis(crms::cli::SweepParam::kLambda, "0.5", "all"), 0.5);
  return s;
}

void BM_Grid(benchmark::State& state) {
  const crms::Scenario& s = light();
  const auto grid = crms::GridSpec::uniform(s.apps, 1, 4, 0.5, 2.0, 100.0);
  crms::GridOptions opts;
  opts.parallel = state.range(0) != 0;
  for (auto _ : state) {
    try {
      benchmark::DoNotOptimize(crms::brute_force_grid(s.apps, s.server, s.weights, grid, opts));
    } catch (const crms::InfeasibleError&) {
    }
  }
  state.counters["grid_points"] = grid.cardinality();
}
BENCHMARK(BM_Grid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RandomSearch(benchmark::State& state) {
  const crms::Scenario& s = constrained();
  crms::RandomSearchOptions opts;
  opts.budget = 20000;
  opts.seed = 1;
  opts.parallel = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(crms::random_search(s.apps, s.server, s.weights, opts));
  }
}
BENCHMARK(BM_RandomSearch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Crms(benchmark::State& state) {
  const crms::Scenario& s = constrained();
  crms::CrmsOptions opts;
  opts.parallel = state.range(0) != 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(crms::crms_plan(s.apps, s.server, s.weights, opts));
  }
}
BENCHMARK(BM_Crms)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// Arg is the thread count for the sweep's outer loop.
void BM_Sweep(benchmark::State& state) {
  const crms::Scenario& s = constrained();
  const crms::cli::SweepAxis axis =
      crms::cli::parse_axis(crms::cli::SweepParam::kLambda, "4:15:0.5", "all");
  crms::cli::MethodOptions opts;
  for (auto _ : state) {
    benchmark::DoNotOptimize(crms::cli::run_sweep(s, axis, std::nullopt, crms::cli::Method::kCrms,
                                                  opts, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_Sweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
