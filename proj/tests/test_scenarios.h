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

// Small scenarios shared by the unit tests.

#pragma once

#include <string>

#include "crms/system.h"

namespace crms::testing {

inline AppProfile make_app(const std::string& name, double k1, double k2, double k3,
                           double r_min, double r_max, double lambda, double x) {
  AppProfile p;
  p.name = name;
  p.latency = {k1, k2, k3, 0.0};
  p.unit = LatencyUnit::kMilliseconds;
  p.r_min = r_min;
  p.r_max = r_max;
  p.arrival_rate = lambda;
  p.mean_images = x;
  return p;
}

inline Scenario inference_scenario(double l1, double l2, double l3, double l4) {
  Scenario s;
  s.server = {30.0, 10240.0, 60.0, 160.0};
  s.weights = {1.4, 0.2};
  s.apps = {
      make_app("resnet_v2", -150.0, 1.0, 1200.0, 200.0, 400.0, l1, 5.0),
      make_app("se_resnext", -250.0, 0.8, 1400.0, 200.0, 400.0, l2, 5.0),
      make_app("mobilenet_v2", -60.0, 1.2, 500.0, 150.0, 350.0, l3, 5.0),
      make_app("ssd_mobilenet_v1", -120.0, 0.9, 2000.0, 330.0, 700.0, l4, 5.0),
  };
  return s;
}

inline Scenario two_app_scenario(double cpu_total, double mem_total) {
  Scenario s;
  s.server = {cpu_total, mem_total, 60.0, 160.0};
  s.weights = {1.4, 0.2};
  s.apps = {
      make_app("a", -500.0, 1.0, 1200.0, 200.0, 400.0, 3.0, 2.0),
      make_app("b", -150.0, 1.2, 500.0, 150.0, 350.0, 4.0, 2.0),
  };
  return s;
}

}  // namespace crms::testing
