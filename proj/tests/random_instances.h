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

// Random valid instances for property tests.

#pragma once

#include <random>
#include <string>

#include "crms/system.h"

namespace crms::testing {

class InstanceGenerator {
 public:
  explicit InstanceGenerator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  AppProfile app(const std::string& name) {
    AppProfile p;
    p.name = name;
    p.unit = LatencyUnit::kMilliseconds;
    p.latency = {-uniform(30.0, 300.0), uniform(0.5, 1.5), uniform(300.0, 1500.0), 0.0};
    p.r_min = uniform(150.0, 250.0);
    p.r_max = p.r_min + uniform(100.0, 400.0);
    p.arrival_rate = uniform(1.0, 10.0);
    p.mean_images = uniform(1.0, 5.0);
    return p;
  }

  ServerSpec server() { return {uniform(10.0, 40.0), uniform(2048.0, 10240.0), 60.0, 160.0}; }

  Weights weights() { return {uniform(0.5, 2.0), uniform(0.05, 1.0)}; }

  Scenario scenario(int apps) {
    Scenario s;
    s.server = server();
    s.weights = weights();
    for (int i = 0; i < apps; ++i) s.apps.push_back(app("app" + std::to_string(i)));
    return s;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace crms::testing
