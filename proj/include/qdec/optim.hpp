// Copyright 2026 The qdec authors
//
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

#pragma once

#include <algorithm>
#include <functional>
#include <vector>

namespace qdec {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Deterministic Nelder-Mead minimizer for small smooth problems. No random
// restarts inside; callers do their own multi-start.
template <typename F>
NelderMeadResult nelder_mead(F &&fn, const std::vector<double> &x0,
                             double initial_step, int max_evals,
                             double ftol = 1e-11) {
  const std::size_t n = x0.size();
  NelderMeadResult result;
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double> &x) {
    ++evals;
    return fn(x);
  };
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += initial_step;
  for (std::size_t i = 0; i <= n; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  while (evals < max_evals) {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order[0], worst = order[n],
                      second = order[n - 1];
    if (vals[worst] - vals[best] <
        ftol * (std::abs(vals[best]) + std::abs(vals[worst]) + 1e-30)) {
      result.converged = true;
      break;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double c = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        if (i != worst) c += pts[i][j];
      centroid[j] = c / static_cast<double>(n);
    }
    for (std::size_t j = 0; j < n; ++j)
      xr[j] = centroid[j] + (centroid[j] - pts[worst][j]);
    const double fr = eval(xr);
    if (fr < vals[order[0]]) {
      for (std::size_t j = 0; j < n; ++j)
        xe[j] = centroid[j] + 2.0 * (centroid[j] - pts[worst][j]);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
    } else if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
    } else {
      const bool outside = fr < vals[worst];
      if (outside) {
        for (std::size_t j = 0; j < n; ++j)
          xc[j] = centroid[j] + 0.5 * (xr[j] - centroid[j]);
      } else {
        for (std::size_t j = 0; j < n; ++j)
          xc[j] = centroid[j] + 0.5 * (pts[worst][j] - centroid[j]);
      }
      const double fc = eval(xc);
      if (fc < std::min(fr, vals[worst])) {
        pts[worst] = xc;
        vals[worst] = fc;
      } else {
        // shrink toward the best vertex
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < n; ++j)
            pts[i][j] = pts[best][j] + 0.5 * (pts[i][j] - pts[best][j]);
          vals[i] = eval(pts[i]);
        }
      }
    }
  }
  std::size_t arg = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (vals[i] < vals[arg]) arg = i;
  result.x = pts[arg];
  result.value = vals[arg];
  result.evaluations = evals;
  return result;
}

} // namespace qdec
