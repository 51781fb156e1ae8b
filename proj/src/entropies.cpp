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

#include "qdec/entropies.hpp"

#include <algorithm>
#include <cmath>

#include "qdec/optim.hpp"
#include "qdec/rng.hpp"

namespace qdec {

namespace {

constexpr double kLog2e = 1.4426950408889634;

// Eigenvalues above the relative support cut, natural logs of them, and the
// projector complement weight of rho on them.
struct Support {
  RealVector values;      // all eigenvalues, ascending
  ComplexMatrix vectors;
  double ev_max = 0.0;
  double cut = 0.0;
  bool in_support(Eigen::Index i) const {
    return values(i) > cut && values(i) > 0.0;
  }
};

Support support_of(const ComplexMatrix &m) {
  Support s;
  HermEig eig = herm_eig(m);
  s.values = std::move(eig.values);
  s.vectors = std::move(eig.vectors);
  s.ev_max = s.values.size() ? s.values(s.values.size() - 1) : 0.0;
  s.cut = kRankTolFactor * std::max(0.0, s.ev_max);
  return s;
}

// log2 sum_i w_i^alpha over w_i > 0, evaluated in log-space so large alpha
// does not underflow.
double log2_power_sum(const std::vector<double> &w, double alpha) {
  double lmax = -std::numeric_limits<double>::infinity();
  for (double x : w) lmax = std::max(lmax, std::log(x));
  double s = 0.0;
  for (double x : w) s += std::exp(alpha * (std::log(x) - lmax));
  return kLog2e * (alpha * lmax + std::log(s));
}

void check_psd_input(const ComplexMatrix &m, const char *what) {
  if (m.rows() != m.cols())
    throw InvariantError(std::string(what) + ": matrix must be square");
  if (hermiticity_residual(m) > kHermTol)
    throw InvariantError(std::string(what) + ": matrix is not Hermitian");
}

} // namespace

double renyi_divergence(const ComplexMatrix &rho, const ComplexMatrix &sigma,
                        double alpha) {
  if (alpha <= 0.0)
    throw InvariantError("renyi_divergence: alpha must be positive");
  if (alpha == 1.0)
    throw InvariantError("renyi_divergence: alpha = 1 excluded, use relative_entropy");
  check_psd_input(rho, "renyi_divergence(rho)");
  check_psd_input(sigma, "renyi_divergence(sigma)");
  if (rho.rows() != sigma.rows())
    throw InvariantError("renyi_divergence: dimension mismatch");

  const double tr_rho = rho.trace().real();
  if (tr_rho <= 1e-14)
    throw InvariantError("renyi_divergence: rho must be nonzero");

  const Support ssig = support_of(sigma);
  if (ssig.values.size() && ssig.values(0) < -kPsdTol)
    throw InvariantError("renyi_divergence: sigma is not PSD");

  // mass of rho outside supp(sigma)
  ComplexMatrix proj_out = ComplexMatrix::Zero(sigma.rows(), sigma.cols());
  double sigma_rank = 0;
  for (Eigen::Index i = 0; i < ssig.values.size(); ++i) {
    if (!ssig.in_support(i)) {
      proj_out += ssig.vectors.col(i) * ssig.vectors.col(i).adjoint();
    } else {
      sigma_rank += 1;
    }
  }
  const double mass_out = (proj_out * rho).trace().real();
  const double mass_in = tr_rho - mass_out;
  if (sigma_rank == 0 || mass_in <= 1e-12 * tr_rho) return kInfBits; // orthogonal
  if (alpha > 1.0 && mass_out > 1e-10 * tr_rho) return kInfBits;     // supp violation

  const double c = (1.0 - alpha) / (2.0 * alpha);
  ComplexMatrix w = ComplexMatrix::Zero(sigma.rows(), sigma.cols());
  for (Eigen::Index i = 0; i < ssig.values.size(); ++i)
    if (ssig.in_support(i))
      w += std::pow(ssig.values(i), c) * ssig.vectors.col(i) *
           ssig.vectors.col(i).adjoint();

  ComplexMatrix t = w * rho * w;
  t = 0.5 * (t + t.adjoint());
  const HermEig teig = herm_eig(t);
  std::vector<double> pos;
  const double tmax = teig.values.size() ? teig.values(teig.values.size() - 1) : 0.0;
  const double tcut = kRankTolFactor * std::max(0.0, tmax);
  for (Eigen::Index i = 0; i < teig.values.size(); ++i)
    if (teig.values(i) > tcut && teig.values(i) > 0.0)
      pos.push_back(teig.values(i));
  if (pos.empty()) return kInfBits;
  const double log2_trace_power = log2_power_sum(pos, alpha);
  return (log2_trace_power - std::log2(tr_rho)) / (alpha - 1.0);
}

double renyi_divergence(const DensityOperator &rho, const DensityOperator &sigma,
                        double alpha) {
  return renyi_divergence(rho.matrix(), sigma.matrix(), alpha);
}

double collision_divergence(const ComplexMatrix &rho, const ComplexMatrix &sigma) {
  return renyi_divergence(rho, sigma, 2.0);
}

double relative_entropy(const ComplexMatrix &rho, const ComplexMatrix &sigma) {
  check_psd_input(rho, "relative_entropy(rho)");
  check_psd_input(sigma, "relative_entropy(sigma)");
  if (rho.rows() != sigma.rows())
    throw InvariantError("relative_entropy: dimension mismatch");
  const double tr_rho = rho.trace().real();
  if (tr_rho <= 1e-14)
    throw InvariantError("relative_entropy: rho must be nonzero");

  const Support ssig = support_of(sigma);
  ComplexMatrix log_sigma = ComplexMatrix::Zero(sigma.rows(), sigma.cols());
  double mass_in = 0.0;
  for (Eigen::Index i = 0; i < ssig.values.size(); ++i) {
    if (ssig.in_support(i)) {
      log_sigma += std::log2(ssig.values(i)) * ssig.vectors.col(i) *
                   ssig.vectors.col(i).adjoint();
      mass_in += (ssig.vectors.col(i).adjoint() * rho * ssig.vectors.col(i))(0, 0)
                     .real();
    }
  }
  if (tr_rho - mass_in > 1e-10 * tr_rho) return kInfBits;

  const Support srho = support_of(rho);
  double h = 0.0;
  for (Eigen::Index i = 0; i < srho.values.size(); ++i)
    if (srho.in_support(i)) h += srho.values(i) * std::log2(srho.values(i));
  return h - (rho * log_sigma).trace().real();
}

double relative_entropy(const DensityOperator &rho, const DensityOperator &sigma) {
  return relative_entropy(rho.matrix(), sigma.matrix());
}

ConditionalSplit conditional_split(const DensityOperator &rho,
                                   const std::vector<std::string> &a_labels) {
  const SystemLayout &layout = rho.layout();
  if (a_labels.empty())
    throw InvariantError("conditional_split: no conditioned systems given");
  std::vector<std::size_t> a_idx;
  for (const auto &l : a_labels) a_idx.push_back(layout.index_of(l));
  std::sort(a_idx.begin(), a_idx.end());
  std::vector<std::size_t> perm = a_idx;
  for (std::size_t i = 0; i < layout.size(); ++i)
    if (std::find(a_idx.begin(), a_idx.end(), i) == a_idx.end())
      perm.push_back(i);

  ConditionalSplit out;
  out.rho = permute_systems(rho.matrix(), layout.dims, perm);
  for (std::size_t k = 0; k < a_idx.size(); ++k) out.d_a *= layout.dims[perm[k]];
  for (std::size_t k = a_idx.size(); k < perm.size(); ++k)
    out.d_b *= layout.dims[perm[k]];
  return out;
}

double cond_entropy_rel(const DensityOperator &rho,
                        const std::vector<std::string> &a_labels,
                        const ComplexMatrix &sigma_b, double alpha) {
  const ConditionalSplit split = conditional_split(rho, a_labels);
  if (sigma_b.rows() != split.d_b || sigma_b.cols() != split.d_b)
    throw InvariantError("cond_entropy_rel: sigma_B dimension mismatch");
  if (std::abs(sigma_b.trace().real() - 1.0) > 1e-9)
    throw InvariantError("cond_entropy_rel: sigma_B must be normalized");
  const ComplexMatrix target =
      tensor(ComplexMatrix::Identity(split.d_a, split.d_a), sigma_b);
  return -renyi_divergence(split.rho, target, alpha);
}

namespace {

// sigma_B from unconstrained Cholesky coordinates; always full rank.
ComplexMatrix sigma_from_params(const std::vector<double> &z, Eigen::Index d) {
  ComplexMatrix l = ComplexMatrix::Zero(d, d);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    l(i, i) = std::exp(std::clamp(z[k++], -18.0, 18.0));
    for (Eigen::Index j = 0; j < i; ++j) {
      const double re = std::clamp(z[k++], -1e6, 1e6);
      const double im = std::clamp(z[k++], -1e6, 1e6);
      l(i, j) = Complex(re, im);
    }
  }
  ComplexMatrix sigma = l * l.adjoint();
  sigma /= sigma.trace().real();
  return sigma;
}

std::vector<double> params_from_sigma(const ComplexMatrix &sigma_in) {
  const Eigen::Index d = sigma_in.rows();
  // regularize so the Cholesky exists
  ComplexMatrix sigma = 0.999 * sigma_in +
                        (0.001 / static_cast<double>(d)) *
                            ComplexMatrix::Identity(d, d);
  sigma = 0.5 * (sigma + sigma.adjoint());
  Eigen::LLT<ComplexMatrix> llt(sigma);
  ComplexMatrix l = llt.matrixL();
  std::vector<double> z;
  for (Eigen::Index i = 0; i < d; ++i) {
    z.push_back(std::log(std::max(1e-18, l(i, i).real())));
    for (Eigen::Index j = 0; j < i; ++j) {
      z.push_back(l(i, j).real());
      z.push_back(l(i, j).imag());
    }
  }
  return z;
}

double eval_cond_alpha(const ComplexMatrix &rho_perm, Eigen::Index d_a,
                       const ComplexMatrix &sigma_b, double alpha) {
  const Eigen::Index d_b = sigma_b.rows();
  const ComplexMatrix target = tensor(ComplexMatrix::Identity(d_a, d_a), sigma_b);
  (void)d_b;
  return -renyi_divergence(rho_perm, target, alpha);
}

} // namespace

CondEntropyResult cond_renyi_entropy(const DensityOperator &rho,
                                     const std::vector<std::string> &a_labels,
                                     double alpha,
                                     const CondEntropyOptions &opts) {
  const ConditionalSplit split = conditional_split(rho, a_labels);
  const Eigen::Index d_b = split.d_b;
  const std::size_t n_params = static_cast<std::size_t>(d_b * d_b);

  if (d_b == 1) {
    CondEntropyResult out;
    out.sigma = ComplexMatrix::Identity(1, 1);
    out.value_bits = eval_cond_alpha(split.rho, split.d_a, out.sigma, alpha);
    out.evaluations = 1;
    return out;
  }

  auto objective = [&](const std::vector<double> &z) {
    const ComplexMatrix sigma = sigma_from_params(z, d_b);
    const double v = eval_cond_alpha(split.rho, split.d_a, sigma, alpha);
    if (!std::isfinite(v)) return 1e100;
    return -v;
  };

  std::vector<std::vector<double>> starts;
  {
    // marginal of rho on B, slightly mixed
    ComplexMatrix marg =
        partial_trace_dims(split.rho, {split.d_a, d_b}, {1});
    marg /= marg.trace().real();
    starts.push_back(params_from_sigma(marg));
    starts.push_back(params_from_sigma(
        ComplexMatrix::Identity(d_b, d_b) / static_cast<double>(d_b)));
    if (opts.warm_sigma) starts.push_back(params_from_sigma(*opts.warm_sigma));
    if (alpha >= 4.0) {
      // for large alpha the h_min optimizer's normalized witness is the
      // natural seed
      HminResult hm = h_min_program(split.rho, split.d_a, d_b);
      ComplexMatrix xs = hm.x_witness / hm.x_witness.trace().real();
      starts.push_back(params_from_sigma(xs));
    }
    Rng rng(Rng::mix(opts.seed, 0x5107));
    for (int r = 0; r < opts.random_starts; ++r) {
      ComplexMatrix g(d_b, d_b);
      for (Eigen::Index i = 0; i < d_b; ++i)
        for (Eigen::Index j = 0; j < d_b; ++j) g(i, j) = rng.cgauss();
      ComplexMatrix s = g * g.adjoint();
      s /= s.trace().real();
      starts.push_back(params_from_sigma(s));
    }
  }

  const int budget = opts.evals_per_start > 0
                         ? opts.evals_per_start
                         : 260 * static_cast<int>(n_params);
  CondEntropyResult best;
  best.value_bits = -kInfBits;
  int total_evals = 0;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    NelderMeadResult nm = nelder_mead(objective, starts[s], 0.25, budget);
    total_evals += nm.evaluations;
    if (-nm.value > best.value_bits) {
      best.value_bits = -nm.value;
      best.sigma = sigma_from_params(nm.x, d_b);
      best.residual = nm.converged ? 0.0 : 1e-9;
    }
  }
  best.evaluations = total_evals;
  return best;
}

HminResult h_min_program(const ComplexMatrix &rho_perm, Eigen::Index d_a,
                         Eigen::Index d_b) {
  const Eigen::Index dim = d_a * d_b;
  if (rho_perm.rows() != dim)
    throw InvariantError("h_min_program: dimension mismatch");

  // orthonormal Hermitian basis on B
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(d_b * d_b));
  for (Eigen::Index i = 0; i < d_b; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(d_b, d_b);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (Eigen::Index i = 0; i < d_b; ++i)
    for (Eigen::Index j = i + 1; j < d_b; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(d_b, d_b);
      e(i, j) = e(j, i) = M_SQRT1_2;
      basis.push_back(e);
      ComplexMatrix f = ComplexMatrix::Zero(d_b, d_b);
      f(i, j) = Complex(0, M_SQRT1_2);
      f(j, i) = Complex(0, -M_SQRT1_2);
      basis.push_back(f);
    }
  const std::size_t m = basis.size();

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> rho_eigs(rho_perm,
                                                        Eigen::EigenvaluesOnly);
  const double ev_max = std::max(rho_eigs.eigenvalues().maxCoeff(), 1e-300);
  ComplexMatrix x = (1.25 * ev_max) * ComplexMatrix::Identity(d_b, d_b);
  const ComplexMatrix eye_a = ComplexMatrix::Identity(d_a, d_a);

  auto lmi = [&](const ComplexMatrix &xx) -> ComplexMatrix {
    return tensor(eye_a, xx) - rho_perm;
  };
  auto barrier_value = [&](double t, const ComplexMatrix &xx,
                           bool &feasible) -> double {
    ComplexMatrix s = lmi(xx);
    Eigen::LLT<ComplexMatrix> llt(s);
    if (llt.info() != Eigen::Success) {
      feasible = false;
      return 0.0;
    }
    feasible = true;
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i)
      logdet += 2.0 * std::log(std::real(llt.matrixL()(i, i)));
    return t * xx.trace().real() - logdet;
  };

  HminResult result;
  double t = 1.0 / ev_max;
  const double rel_gap_target = 1e-11;
  const int max_stages = 80;
  for (int stage = 0; stage < max_stages; ++stage) {
    for (int iter = 0; iter < 60; ++iter) {
      ComplexMatrix s = lmi(x);
      Eigen::LLT<ComplexMatrix> llt(s);
      if (llt.info() != Eigen::Success)
        throw SolverError("h_min: lost strict feasibility");
      ComplexMatrix sinv = llt.solve(ComplexMatrix::Identity(dim, dim));
      sinv = 0.5 * (sinv + sinv.adjoint());
      ComplexMatrix grad_mat =
          t * ComplexMatrix::Identity(d_b, d_b) -
          partial_trace_dims(sinv, {d_a, d_b}, {1});

      Eigen::VectorXd g(m);
      for (std::size_t k = 0; k < m; ++k)
        g(static_cast<Eigen::Index>(k)) =
            (basis[k] * grad_mat).trace().real();

      Eigen::MatrixXd hess(m, m);
      std::vector<ComplexMatrix> tk(m);
      for (std::size_t k = 0; k < m; ++k) {
        const ComplexMatrix mk = sinv * tensor(eye_a, basis[k]) * sinv;
        tk[k] = partial_trace_dims(mk, {d_a, d_b}, {1});
      }
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = 0; k < m; ++k)
          hess(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) =
              (basis[j] * tk[k]).trace().real();
      hess = 0.5 * (hess + hess.transpose());
      hess.diagonal().array() += 1e-13 * (1.0 + hess.diagonal().maxCoeff());

      Eigen::VectorXd step = hess.ldlt().solve(-g);
      const double decrement2 = -g.dot(step);
      ComplexMatrix dx = ComplexMatrix::Zero(d_b, d_b);
      for (std::size_t k = 0; k < m; ++k)
        dx += step(static_cast<Eigen::Index>(k)) * basis[k];

      bool feasible = false;
      const double phi0 = barrier_value(t, x, feasible);
      double alpha_step = 1.0;
      bool accepted = false;
      while (alpha_step > 1e-14) {
        bool ok = false;
        const double phi1 = barrier_value(t, x + alpha_step * dx, ok);
        if (ok && phi1 <= phi0 + 1e-4 * alpha_step * g.dot(step)) {
          x += alpha_step * dx;
          accepted = true;
          break;
        }
        alpha_step *= 0.5;
      }
      ++result.newton_steps;
      if (!accepted) break;
      if (decrement2 * 0.5 < 1e-16 * (1.0 + std::abs(phi0))) break;
    }
    const double tr_x = x.trace().real();
    const double gap = static_cast<double>(dim) / t;
    if (gap <= rel_gap_target * std::max(tr_x, 1e-300)) {
      result.gap = gap;
      break;
    }
    t *= 10.0;
    if (stage == max_stages - 1)
      throw SolverError("h_min: barrier did not reach its gap target");
  }

  // shift into strict feasibility if roundoff nudged an eigenvalue negative
  ComplexMatrix s_final = lmi(x);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s_final, Eigen::EigenvaluesOnly);
  const double min_ev = es.eigenvalues()(0);
  if (min_ev < 0.0)
    x -= (min_ev - 1e-16) * ComplexMatrix::Identity(d_b, d_b) / 1.0;

  result.x_witness = x;
  result.value_bits = -std::log2(x.trace().real());
  return result;
}

HminResult h_min(const DensityOperator &rho,
                 const std::vector<std::string> &a_labels) {
  const ConditionalSplit split = conditional_split(rho, a_labels);
  return h_min_program(split.rho, split.d_a, split.d_b);
}

CondEntropyResult h_max(const DensityOperator &rho,
                        const std::vector<std::string> &a_labels,
                        const CondEntropyOptions &opts) {
  return cond_renyi_entropy(rho, a_labels, 0.5, opts);
}

double h0_eps(const DensityOperator &rho, double eps) {
  if (eps < 0.0 || eps > 1.0)
    throw InvariantError("h0_eps: eps must lie in [0, 1]");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(),
                                                  Eigen::EigenvaluesOnly);
  RealVector ev = es.eigenvalues(); // ascending
  const Eigen::Index n = ev.size();
  std::vector<double> lam(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    lam[static_cast<std::size_t>(i)] = std::max(0.0, ev(i));
  const double tr = rho.trace_mass();

  // removing the k smallest eigenvalues keeps F = sum_{i>=k} lam_i
  //                                            + sqrt((1-tr)(1-tr+removed))
  Eigen::Index best_removed = 0;
  double tail = 0.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    tail += lam[static_cast<std::size_t>(k - 1)];
    const double kept = std::max(0.0, tr - tail);
    double f = 0.0;
    for (Eigen::Index i = k; i < n; ++i) f += lam[static_cast<std::size_t>(i)];
    f += std::sqrt(std::max(0.0, 1.0 - tr) * std::max(0.0, 1.0 - kept));
    f = std::clamp(f, 0.0, 1.0);
    const double p = std::sqrt(std::max(0.0, 1.0 - f * f));
    if (p <= eps + 1e-12) best_removed = k;
  }
  const Eigen::Index remaining = n - best_removed;
  if (remaining == 0) return -kInfBits;
  return std::log2(static_cast<double>(remaining));
}

double von_neumann(const DensityOperator &rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix(),
                                                  Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    if (l > 1e-15) h -= l * std::log2(l);
  }
  return h;
}

double cond_von_neumann(const DensityOperator &rho,
                        const std::vector<std::string> &a_labels) {
  std::vector<std::string> b_labels;
  for (const auto &l : rho.layout().labels)
    if (std::find(a_labels.begin(), a_labels.end(), l) == a_labels.end())
      b_labels.push_back(l);
  if (b_labels.empty()) return von_neumann(rho);
  return von_neumann(rho) - von_neumann(rho.marginal(b_labels));
}

double mutual_information(const DensityOperator &rho,
                          const std::vector<std::string> &a_labels) {
  std::vector<std::string> b_labels;
  for (const auto &l : rho.layout().labels)
    if (std::find(a_labels.begin(), a_labels.end(), l) == a_labels.end())
      b_labels.push_back(l);
  if (a_labels.empty() || b_labels.empty())
    throw InvariantError("mutual_information: need a nontrivial bipartition");
  return von_neumann(rho.marginal(a_labels)) + von_neumann(rho.marginal(b_labels)) -
         von_neumann(rho);
}

} // namespace qdec
