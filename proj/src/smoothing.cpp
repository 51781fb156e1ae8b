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

#include "qdec/smoothing.hpp"

#include <algorithm>
#include <cmath>

#include "qdec/optim.hpp"
#include "qdec/rng.hpp"

namespace qdec {

namespace {

// Ball exploration around a fixed purification |psi> of rho in H_AB (x) H_C
// (d_C = d_AB). Candidates are geodesic rotations cos(t)|psi> + sin(t)|dir>
// re-traced over C, times a trace scale s. Feasibility is analytic: the
// purified distance of the rotated, scaled pure state to |psi> is
// sqrt(1 - s cos^2 t), and partial trace only shrinks it.
class BallSampler {
public:
  BallSampler(const ComplexMatrix &rho_perm, double eps)
      : dim_(rho_perm.rows()), eps_(eps) {
    HermEig eig = herm_eig(rho_perm);
    psi_ = ComplexVector::Zero(dim_ * dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) {
      const double l = std::max(0.0, eig.values(i));
      // |psi> = sum_i sqrt(l_i) |v_i>|i>_C
      psi_ += std::sqrt(l) * tensor_vec(eig.vectors.col(i), i);
    }
    psi_.normalize(); // input trace may be < 1; the ball is around rho itself
    trace_in_ = rho_perm.trace().real();
    t_full_ = std::acos(std::sqrt(std::max(0.0, 1.0 - eps * eps)));
  }

  Eigen::Index purification_dim() const { return dim_ * dim_; }
  double t_full() const { return t_full_; }

  // Candidate from a tangent direction, rotation angle t in [0, t_full] and
  // scale knob u in [0,1] (u = 1 spends the whole remaining budget on trace).
  ComplexMatrix candidate(const ComplexVector &dir, double t, double u) const {
    t = std::clamp(t, 0.0, t_full_);
    u = std::clamp(u, 0.0, 1.0);
    ComplexVector rotated = std::cos(t) * psi_ + std::sin(t) * dir;
    const double c2 = std::cos(t) * std::cos(t);
    const double s_min = c2 > 0.0 ? std::min(1.0, (1.0 - eps_ * eps_) / c2) : 1.0;
    const double s = 1.0 - (1.0 - s_min) * u;
    ComplexMatrix full = rotated * rotated.adjoint();
    ComplexMatrix reduced = partial_trace_dims(full, {dim_, dim_}, {0});
    return (s * trace_in_) * reduced;
  }

  // Orthonormal tangent direction derived deterministically from a seed.
  ComplexVector random_tangent(Rng &rng) const {
    ComplexVector g(psi_.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = rng.cgauss();
    Complex overlap = psi_.dot(g); // conj(psi) . g
    g -= overlap * psi_;
    const double n = g.norm();
    if (n < 1e-14) return random_tangent(rng);
    return g / n;
  }

  ComplexVector combine(const std::vector<ComplexVector> &dirs,
                        const double *coeffs, std::size_t n,
                        double *angle_out) const {
    ComplexVector w = ComplexVector::Zero(psi_.size());
    double norm2 = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      w += coeffs[k] * dirs[k];
      norm2 += coeffs[k] * coeffs[k];
    }
    const double raw = std::sqrt(norm2);
    *angle_out = t_full_ * std::min(1.0, raw);
    const double n2 = w.norm();
    if (n2 < 1e-14) {
      *angle_out = 0.0;
      return dirs.empty() ? w : dirs[0];
    }
    return w / n2;
  }

private:
  ComplexVector tensor_vec(const ComplexVector &v, Eigen::Index c_index) const {
    ComplexVector out = ComplexVector::Zero(dim_ * dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) out(i * dim_ + c_index) = v(i);
    return out;
  }

  Eigen::Index dim_;
  double eps_;
  double trace_in_ = 1.0;
  double t_full_ = 0.0;
  ComplexVector psi_;
};

struct InnerEval {
  // Returns the non-smooth quantity at the candidate matrix (permuted layout).
  // `fast` skips certification bells during the search.
  std::function<double(const ComplexMatrix &)> value;
};

struct SearchOutcome {
  ComplexMatrix best_matrix;
  double best_value = 0.0;
  int evaluations = 0;
};

// Shared outer search; maximize ? sup : inf of `inner` over the ball.
SearchOutcome outer_search(const BallSampler &sampler, bool maximize,
                           const SmoothOptions &opts, Eigen::Index dim,
                           const std::function<double(const ComplexMatrix &)> &inner) {
  const double sign = maximize ? 1.0 : -1.0;
  SearchOutcome out;
  int evals = 0;

  auto eval_candidate = [&](const ComplexMatrix &cand) {
    ++evals;
    return sign * inner(cand);
  };

  // tangent basis: full space when small, random subspace otherwise
  const Eigen::Index full_real_dim = 2 * sampler.purification_dim() - 2;
  int n_dirs = opts.max_tangent_dims > 0
                   ? opts.max_tangent_dims
                   : (full_real_dim <= 32 ? static_cast<int>(full_real_dim) : 28);
  n_dirs = std::max(4, std::min<int>(n_dirs, static_cast<int>(full_real_dim)));

  Rng rng(Rng::mix(opts.seed, 0xba11));
  std::vector<ComplexVector> dirs;
  dirs.reserve(static_cast<std::size_t>(std::max(opts.directions, n_dirs)));
  for (int k = 0; k < std::max(opts.directions, n_dirs); ++k)
    dirs.push_back(sampler.random_tangent(rng));

  // coarse scan: each direction at a few radii and both trace knobs
  struct Coarse {
    double score;
    std::size_t dir;
    double t_frac;
    double u;
  };
  std::vector<Coarse> coarse;
  {
    const ComplexMatrix center = sampler.candidate(dirs[0], 0.0, 0.0);
    const double v0 = eval_candidate(center);
    coarse.push_back({v0, 0, 0.0, 0.0});
    const ComplexMatrix scaled = sampler.candidate(dirs[0], 0.0, 1.0);
    coarse.push_back({eval_candidate(scaled), 0, 0.0, 1.0});
  }
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    for (double tf : {0.5, 1.0}) {
      for (double u : {0.0, 1.0}) {
        const ComplexMatrix cand =
            sampler.candidate(dirs[k], tf * sampler.t_full(), u);
        coarse.push_back({eval_candidate(cand), k, tf, u});
      }
    }
  }
  std::stable_sort(coarse.begin(), coarse.end(),
                   [](const Coarse &a, const Coarse &b) { return a.score > b.score; });

  // polish with NM over subspace coefficients + trace knob
  const std::size_t nm_dims = static_cast<std::size_t>(n_dirs) + 1;
  auto nm_objective = [&](const std::vector<double> &z) {
    double angle = 0.0;
    const ComplexVector dir =
        sampler.combine(dirs, z.data(), static_cast<std::size_t>(n_dirs), &angle);
    const double u = 0.5 * (1.0 + std::tanh(z[nm_dims - 1]));
    const ComplexMatrix cand = sampler.candidate(dir, angle, u);
    return -eval_candidate(cand); // NM minimizes
  };

  // random scan in the same coordinates; best points seed extra NM starts
  struct Scan {
    double score;
    std::vector<double> z;
  };
  std::vector<Scan> scans;
  {
    Rng scan_rng(Rng::mix(opts.seed, 0x5ca2));
    for (int i = 0; i < opts.random_scan; ++i) {
      std::vector<double> z(nm_dims);
      const double radius = scan_rng.uniform01() * 1.2;
      double norm2 = 0.0;
      for (std::size_t k = 0; k + 1 < nm_dims; ++k) {
        z[k] = scan_rng.gauss();
        norm2 += z[k] * z[k];
      }
      const double scale = norm2 > 0 ? radius / std::sqrt(norm2) : 0.0;
      for (std::size_t k = 0; k + 1 < nm_dims; ++k) z[k] *= scale;
      z[nm_dims - 1] = scan_rng.uniform(-2.0, 2.0);
      const double score = -nm_objective(z);
      if (scans.size() < 2) {
        scans.push_back({score, z});
      } else if (score > std::min(scans[0].score, scans[1].score)) {
        scans[scans[0].score < scans[1].score ? 0 : 1] = {score, z};
      }
    }
  }

  double best_score = coarse.front().score;
  std::vector<double> best_z;
  const int starts = std::max(1, opts.polish_starts);
  for (int s = 0; s < starts && s < static_cast<int>(coarse.size()); ++s) {
    const Coarse &c = coarse[static_cast<std::size_t>(s)];
    std::vector<double> z0(nm_dims, 0.0);
    if (c.dir < static_cast<std::size_t>(n_dirs)) z0[c.dir] = c.t_frac;
    z0[nm_dims - 1] = c.u > 0.5 ? 1.5 : -1.5;
    NelderMeadResult nm = nelder_mead(nm_objective, z0, 0.2, opts.polish_evals);
    if (-nm.value > best_score) {
      best_score = -nm.value;
      best_z = nm.x;
    }
  }
  for (const Scan &scan : scans) {
    NelderMeadResult nm =
        nelder_mead(nm_objective, scan.z, 0.15, opts.polish_evals);
    if (-nm.value > best_score) {
      best_score = -nm.value;
      best_z = nm.x;
    }
  }
  // refinement waves: restart the simplex around the incumbent at finer scales
  if (!best_z.empty()) {
    for (double step : {0.06, 0.015, 0.004}) {
      NelderMeadResult nm =
          nelder_mead(nm_objective, best_z, step, opts.polish_evals);
      if (-nm.value > best_score) {
        best_score = -nm.value;
        best_z = nm.x;
      }
    }
  }

  if (best_z.empty()) {
    const Coarse &c = coarse.front();
    out.best_matrix = sampler.candidate(dirs[c.dir], c.t_frac * sampler.t_full(), c.u);
  } else {
    double angle = 0.0;
    const ComplexVector dir = sampler.combine(
        dirs, best_z.data(), static_cast<std::size_t>(n_dirs), &angle);
    const double u = 0.5 * (1.0 + std::tanh(best_z[nm_dims - 1]));
    out.best_matrix = sampler.candidate(dir, angle, u);
  }
  out.best_value = sign * best_score;
  out.evaluations = evals;
  (void)dim;
  return out;
}

DensityOperator witness_from_matrix(const ComplexMatrix &mat_perm,
                                    const DensityOperator &rho,
                                    const std::vector<std::string> &a_labels) {
  // permuted layout: conditioned labels first, complement after, original
  // relative orders preserved
  const SystemLayout &layout = rho.layout();
  std::vector<std::string> ls;
  std::vector<Eigen::Index> ds;
  for (const auto &l : layout.labels)
    if (std::find(a_labels.begin(), a_labels.end(), l) != a_labels.end()) {
      ls.push_back(l);
      ds.push_back(layout.dims[layout.index_of(l)]);
    }
  for (const auto &l : layout.labels)
    if (std::find(a_labels.begin(), a_labels.end(), l) == a_labels.end()) {
      ls.push_back(l);
      ds.push_back(layout.dims[layout.index_of(l)]);
    }
  ComplexMatrix clean = 0.5 * (mat_perm + mat_perm.adjoint());
  // clip trace overshoot from roundoff
  const double tr = clean.trace().real();
  if (tr > 1.0) clean *= (1.0 - 1e-15) / tr;
  return DensityOperator(clean, SystemLayout(ls, ds));
}

} // namespace

SmoothingResult smooth_h_min(const DensityOperator &rho,
                             const std::vector<std::string> &a_labels,
                             double eps, const SmoothOptions &opts) {
  if (eps < 0.0 || eps > 1.0)
    throw InvariantError("smooth_h_min: eps must lie in [0, 1]");
  const ConditionalSplit split = conditional_split(rho, a_labels);

  if (eps < 1e-9) {
    HminResult hm = h_min_program(split.rho, split.d_a, split.d_b);
    SmoothingResult out{hm.value_bits,
                        witness_from_matrix(split.rho, rho, a_labels),
                        hm.x_witness / hm.x_witness.trace().real(),
                        hm.newton_steps, hm.gap};
    return out;
  }

  BallSampler sampler(split.rho, eps);
  auto inner = [&](const ComplexMatrix &cand) {
    return h_min_program(cand, split.d_a, split.d_b).value_bits;
  };
  SearchOutcome search =
      outer_search(sampler, /*maximize=*/true, opts, split.rho.rows(), inner);

  HminResult certify = h_min_program(search.best_matrix, split.d_a, split.d_b);
  SmoothingResult out{certify.value_bits,
                      witness_from_matrix(search.best_matrix, rho, a_labels),
                      certify.x_witness / certify.x_witness.trace().real(),
                      search.evaluations, certify.gap};
  return out;
}

SmoothingResult smooth_h_max(const DensityOperator &rho,
                             const std::vector<std::string> &a_labels,
                             double eps, const SmoothOptions &opts) {
  if (eps < 0.0 || eps > 1.0)
    throw InvariantError("smooth_h_max: eps must lie in [0, 1]");
  const ConditionalSplit split = conditional_split(rho, a_labels);
  const Eigen::Index d_a = split.d_a, d_b = split.d_b;

  // fast H_{1/2} evaluation with a warm sigma carried across candidates
  ComplexMatrix warm = partial_trace_dims(split.rho, {d_a, d_b}, {1});
  warm /= warm.trace().real();
  auto h_half_at = [&](const ComplexMatrix &cand, const ComplexMatrix &sigma) {
    const ComplexMatrix target = tensor(ComplexMatrix::Identity(d_a, d_a), sigma);
    return -renyi_divergence(cand, target, 0.5);
  };
  auto full_opt = [&](const ComplexMatrix &cand,
                      const ComplexMatrix &seed) -> CondEntropyResult {
    // local NM over sigma starting from the warm seed
    auto obj = [&](const std::vector<double> &z) {
      ComplexMatrix l = ComplexMatrix::Zero(d_b, d_b);
      std::size_t k = 0;
      for (Eigen::Index i = 0; i < d_b; ++i) {
        l(i, i) = std::exp(std::clamp(z[k++], -18.0, 18.0));
        for (Eigen::Index j = 0; j < i; ++j) {
          l(i, j) = Complex(z[k], z[k + 1]);
          k += 2;
        }
      }
      ComplexMatrix s = l * l.adjoint();
      s /= s.trace().real();
      const double v = h_half_at(cand, s);
      return std::isfinite(v) ? -v : 1e100;
    };
    // Cholesky coordinates of the seed
    ComplexMatrix reg = 0.995 * seed + (0.005 / static_cast<double>(d_b)) *
                                           ComplexMatrix::Identity(d_b, d_b);
    Eigen::LLT<ComplexMatrix> llt(0.5 * (reg + reg.adjoint()));
    ComplexMatrix l = llt.matrixL();
    std::vector<double> z;
    for (Eigen::Index i = 0; i < d_b; ++i) {
      z.push_back(std::log(std::max(1e-18, l(i, i).real())));
      for (Eigen::Index j = 0; j < i; ++j) {
        z.push_back(l(i, j).real());
        z.push_back(l(i, j).imag());
      }
    }
    NelderMeadResult nm = nelder_mead(obj, z, 0.15, opts.inner_evals);
    CondEntropyResult r;
    r.value_bits = -nm.value;
    ComplexMatrix lbest = ComplexMatrix::Zero(d_b, d_b);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < d_b; ++i) {
      lbest(i, i) = std::exp(std::clamp(nm.x[k++], -18.0, 18.0));
      for (Eigen::Index j = 0; j < i; ++j) {
        lbest(i, j) = Complex(nm.x[k], nm.x[k + 1]);
        k += 2;
      }
    }
    r.sigma = lbest * lbest.adjoint();
    r.sigma /= r.sigma.trace().real();
    r.evaluations = nm.evaluations;
    return r;
  };

  if (eps < 1e-9) {
    CondEntropyOptions copts;
    copts.seed = opts.seed;
    CondEntropyResult base = h_max(rho, a_labels, copts);
    SmoothingResult out{base.value_bits,
                        witness_from_matrix(split.rho, rho, a_labels), base.sigma,
                        base.evaluations, base.residual};
    return out;
  }

  BallSampler sampler(split.rho, eps);
  auto inner = [&](const ComplexMatrix &cand) {
    CondEntropyResult r = full_opt(cand, warm);
    warm = r.sigma; // carry across candidates; deterministic serial order
    return r.value_bits;
  };
  SearchOutcome search =
      outer_search(sampler, /*maximize=*/false, opts, split.rho.rows(), inner);

  // certify at the witness with the full sigma optimizer
  DensityOperator witness = witness_from_matrix(search.best_matrix, rho, a_labels);
  CondEntropyOptions copts;
  copts.seed = opts.seed;
  copts.warm_sigma = warm;
  CondEntropyResult cert = h_max(witness, a_labels, copts);
  SmoothingResult out{cert.value_bits, witness, cert.sigma, search.evaluations,
                      cert.residual};
  return out;
}

} // namespace qdec
