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

// Numeric checks shared by the unit tests and the acceptance binary.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <vector>

#include "crms/system.h"

namespace crms::testing {

// Smallest eigenvalue of the central-difference Hessian of f at (x, y), with
// steps relative to each coordinate.
template <typename F>
double min_hessian_eigenvalue(const F& f, double x, double y, double rel_step = 1e-3) {
  const double hx = rel_step * x, hy = rel_step * y;
  Eigen::Matrix2d h;
  h(0, 0) = (f(x + hx, y) - 2 * f(x, y) + f(x - hx, y)) / (hx * hx);
  h(1, 1) = (f(x, y + hy) - 2 * f(x, y) + f(x, y - hy)) / (hy * hy);
  h(0, 1) = h(1, 0) =
      (f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy)) /
      (4 * hx * hy);
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(h).eigenvalues().minCoeff();
}

// Exact minimum of U over a 4-D grid for two apps at fixed counts: r_cpu on
// {step, 2 step, ...}, r_mem on {r_min, r_min + m_step, ...}. U is
// decreasing in r_mem, so the second app takes the largest memory value that
// fits; over r_cpu it takes the best value within the remaining CPU (prefix
// minimum).
inline double two_app_grid_min(const Scenario& s, const std::vector<int>& n, double r_step,
                               double m_step) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const AppProfile& a = s.apps[0];
  const AppProfile& b = s.apps[1];
  std::vector<double> rs;
  for (double r = r_step; r <= s.server.cpu_total + 1e-12; r += r_step) rs.push_back(r);
  std::vector<double> ma, mb;
  for (double m = a.r_min; m <= a.r_max + 1e-9; m += m_step) ma.push_back(m);
  for (double m = b.r_min; m <= b.r_max + 1e-9; m += m_step) mb.push_back(m);
  std::vector<std::vector<double>> prefix(mb.size(), std::vector<double>(rs.size()));
  for (std::size_t j = 0; j < mb.size(); ++j) {
    double run = kInf;
    for (std::size_t k = 0; k < rs.size(); ++k) {
      run = std::min(run, app_utility(b, {n[1], rs[k], mb[j]}, s.server, s.weights));
      prefix[j][k] = run;
    }
  }
  double best = kInf;
  for (double r : rs) {
    for (double m : ma) {
      const double cpu_left = s.server.cpu_total - n[0] * r;
      const double mem_left = s.server.mem_total - n[0] * m;
      if (cpu_left < r_step * n[1] || mem_left < b.r_min * n[1]) continue;
      const auto k = static_cast<std::size_t>(
          std::upper_bound(rs.begin(), rs.end(), cpu_left / n[1] + 1e-12) - rs.begin());
      const auto j = static_cast<std::size_t>(
          std::upper_bound(mb.begin(), mb.end(), mem_left / n[1] + 1e-9) - mb.begin());
      if (k == 0 || j == 0) continue;
      best = std::min(best,
                      app_utility(a, {n[0], r, m}, s.server, s.weights) + prefix[j - 1][k - 1]);
    }
  }
  return best;
}

}  // namespace crms::testing
