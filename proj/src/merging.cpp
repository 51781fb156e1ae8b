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

#include "qdec/merging.hpp"

#include <algorithm>
#include <cmath>

#include "qdec/entropies.hpp"

namespace qdec {

double lambda_prime_of(double lambda) {
  const double root = 4.0 * std::sqrt(lambda) - 4.0 * lambda;
  if (root < -1e-15)
    throw InvariantError("lambda_prime_of: lambda outside (0, 1]");
  return lambda + std::sqrt(std::max(0.0, root));
}

double eps_from_lambda(double lambda) {
  if (lambda <= 0.0 || lambda > 1.0)
    throw InvariantError("eps_from_lambda: lambda outside (0, 1]");
  return 2.0 * std::sqrt(5.0 * lambda_prime_of(lambda)) + 2.0 * std::sqrt(lambda);
}

namespace {

// eps(lambda) rises from 0, peaks near lambda ~ 0.83 above eps(1), then falls
// back to eps(1); only the increasing branch is invertible and it covers the
// declared range (0, eps(1)] on its own. The grid check below locates the
// peak and verifies monotonicity on the branch.
struct EpsCurve {
  double lambda_peak;
  double eps_at_one;
};

const EpsCurve &eps_curve() {
  static const EpsCurve curve = [] {
    constexpr int kGrid = 10000;
    EpsCurve c{1.0, 0.0};
    double best = -1.0;
    double prev = 0.0;
    std::size_t peak_index = 0;
    std::vector<double> lams(kGrid), vals(kGrid);
    for (int i = 0; i < kGrid; ++i) {
      const double frac = static_cast<double>(i + 1) / kGrid;
      lams[static_cast<std::size_t>(i)] = frac;
      vals[static_cast<std::size_t>(i)] = eps_from_lambda(frac);
      if (vals[static_cast<std::size_t>(i)] > best) {
        best = vals[static_cast<std::size_t>(i)];
        peak_index = static_cast<std::size_t>(i);
      }
    }
    for (std::size_t i = 1; i <= peak_index; ++i) {
      if (vals[i] <= vals[i - 1])
        throw SolverError("lambda_from_eps: eps(lambda) not monotone on the "
                          "increasing branch");
    }
    (void)prev;
    c.lambda_peak = lams[peak_index];
    c.eps_at_one = vals[kGrid - 1];
    return c;
  }();
  return curve;
}

} // namespace

double merging_eps_max() { return eps_curve().eps_at_one; }

LambdaPair lambda_from_eps(double eps) {
  const EpsCurve &curve = eps_curve();
  if (eps <= 0.0 || eps > curve.eps_at_one)
    throw InvariantError("lambda_from_eps: eps outside the achievable range (0, " +
                         std::to_string(curve.eps_at_one) + "]");
  // bisection on log(lambda) over the increasing branch
  double lo = std::log(1e-300);
  double hi = std::log(curve.lambda_peak);
  if (eps_from_lambda(std::exp(hi)) < eps)
    throw SolverError("lambda_from_eps: eps not bracketed on the branch");
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double val = eps_from_lambda(std::exp(mid));
    if (val < eps)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-14) break;
  }
  LambdaPair out;
  out.lambda = std::exp(0.5 * (lo + hi));
  out.lambda_prime = lambda_prime_of(out.lambda);
  const double residual = std::abs(eps_from_lambda(out.lambda) - eps);
  if (residual > 1e-10 * std::max(1.0, eps))
    throw SolverError("lambda_from_eps: bisection residual " +
                      std::to_string(residual));
  return out;
}

namespace {

double log_term_bits(double lambda_prime, double delta, Eigen::Index d_a,
                     Eigen::Index d_a1) {
  const double da = static_cast<double>(d_a);
  return std::log2(lambda_prime) -
         0.5 * std::log2(1.0 + 3.0 * (da * da / static_cast<double>(d_a1)) * delta);
}

} // namespace

RateReport merging_rates(const PureState &psi, double eps, double delta,
                         Eigen::Index d_a1, const SmoothOptions &opts) {
  if (delta < 0.0) throw InvariantError("merging_rates: delta must be nonnegative");
  const SystemLayout &layout = psi.layout();
  if (layout.size() != 3 || layout.labels[0] != "A" || layout.labels[1] != "B" ||
      layout.labels[2] != "R")
    throw InvariantError("merging_rates: state must carry layout {A, B, R}");

  const LambdaPair lp = lambda_from_eps(eps);
  // smoothing at lambda per the rate displays; tiny lambda short-circuits to
  // the non-smooth quantities inside the smoothing module
  const double smooth_eps = std::min(1.0, lp.lambda);

  const DensityOperator rho_ar = psi.marginal({"A", "R"});
  const DensityOperator rho_a = psi.marginal({"A"});

  const SmoothingResult hmin = smooth_h_min(rho_ar, {"A"}, smooth_eps, opts);
  const double h0 = h0_eps(rho_a, smooth_eps);

  const Eigen::Index d_a = layout.dims[0];
  Eigen::Index d_a1_eff = d_a1;
  if (d_a1_eff <= 0) {
    // delta = 0 pre-pass: the produced entanglement sets |A1|
    const double e0 = 0.5 * (hmin.value_bits + h0) + std::log2(lp.lambda_prime);
    const double ceil_e0 = std::ceil(e0);
    d_a1_eff = ceil_e0 <= 0.0
                   ? 1
                   : static_cast<Eigen::Index>(std::llround(std::pow(2.0, ceil_e0)));
    d_a1_eff = std::max<Eigen::Index>(1, d_a1_eff);
  }

  const double lt = log_term_bits(lp.lambda_prime, delta, d_a, d_a1_eff);
  RateReport report;
  report.e_lower = 0.5 * (hmin.value_bits + h0) + lt;
  report.q_upper = 0.5 * (-hmin.value_bits + h0) - lt;
  report.lambda = lp.lambda;
  report.lambda_prime = lp.lambda_prime;
  report.h_min_eps = hmin.value_bits;
  report.h0_eps_bits = h0;
  report.delta = delta;
  report.d_a1 = d_a1_eff;
  report.eps = eps;
  return report;
}

AsymptoticRates asymptotic_rates(const PureState &psi) {
  const SystemLayout &layout = psi.layout();
  if (layout.size() != 3)
    throw InvariantError("asymptotic_rates: state must carry layout {A, B, R}");
  const DensityOperator rho_ar = psi.marginal({"A", "R"});
  const DensityOperator rho_ab = psi.marginal({"A", "B"});
  AsymptoticRates out;
  out.q_inf = 0.5 * mutual_information(rho_ar, {"A"});
  out.e_inf = 0.5 * mutual_information(rho_ab, {"A"});
  return out;
}

PureState tensor_power_grouped(const PureState &psi, int n) {
  if (n < 1) throw InvariantError("tensor_power_grouped: n must be >= 1");
  const SystemLayout &layout = psi.layout();
  const std::size_t k = layout.size();
  ComplexVector amp = psi.amplitudes();
  std::vector<Eigen::Index> dims = layout.dims;
  for (int copy = 1; copy < n; ++copy) {
    ComplexVector next(amp.size() * psi.dim());
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < amp.size(); ++i)
      for (Eigen::Index j = 0; j < psi.dim(); ++j)
        next(idx++) = amp(i) * psi.amplitudes()(j);
    amp = std::move(next);
    for (auto d : layout.dims) dims.push_back(d);
  }
  // regroup copies: (S1 of copy1, S1 of copy2, ..., S2 of copy1, ...)
  std::vector<std::size_t> perm;
  for (std::size_t s = 0; s < k; ++s)
    for (int copy = 0; copy < n; ++copy)
      perm.push_back(static_cast<std::size_t>(copy) * k + s);
  amp = permute_systems_vec(amp, dims, perm);

  std::vector<Eigen::Index> grouped_dims;
  for (std::size_t s = 0; s < k; ++s) {
    Eigen::Index d = 1;
    for (int copy = 0; copy < n; ++copy) d *= layout.dims[s];
    grouped_dims.push_back(d);
  }
  return PureState(amp, SystemLayout(layout.labels, grouped_dims));
}

std::vector<IidPoint> iid_trend(const PureState &psi, double eps, int n_max,
                                double delta, const SmoothOptions &opts) {
  if (n_max < 1 || n_max > 3)
    throw InvariantError("iid_trend: n_max must lie in 1..3");
  const Eigen::Index d_a = psi.layout().dims[0];
  const AsymptoticRates limit = asymptotic_rates(psi);

  std::vector<IidPoint> points;
  for (int n = 1; n <= n_max; ++n) {
    Eigen::Index da_n = 1;
    for (int i = 0; i < n; ++i) da_n *= d_a;
    if (da_n > 64) throw InvariantError("iid_trend: d_A^n exceeds 64");
    const PureState psi_n = tensor_power_grouped(psi, n);
    const RateReport r = merging_rates(psi_n, eps, delta, 0, opts);
    IidPoint pt;
    pt.n = n;
    pt.e_rate = r.e_lower / n;
    pt.q_rate = r.q_upper / n;
    pt.e_gap = std::abs(pt.e_rate - limit.e_inf);
    pt.q_gap = std::abs(pt.q_rate - limit.q_inf);
    points.push_back(pt);
  }
  return points;
}

} // namespace qdec
