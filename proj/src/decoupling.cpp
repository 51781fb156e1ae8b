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

#include "qdec/decoupling.hpp"

#include <algorithm>
#include <cmath>

#include "qdec/parallel.hpp"

namespace qdec {

namespace {

struct ArPieces {
  Eigen::Index d_a = 0, d_r = 0;
  ComplexMatrix rho;   // ordered (A, R)
  ComplexMatrix rho_r; // tr_A rho
};

ArPieces ar_pieces(const DensityOperator &rho_ar, const BipartiteSplit &split) {
  const SystemLayout &layout = rho_ar.layout();
  if (layout.size() != 2 || layout.labels[0] != "A" || layout.labels[1] != "R")
    throw InvariantError("decoupling: state must carry layout {A, R}");
  ArPieces p;
  p.d_a = layout.dims[0];
  p.d_r = layout.dims[1];
  if (split.d_a() != p.d_a)
    throw InvariantError("decoupling: split does not factor d_A");
  p.rho = rho_ar.matrix();
  p.rho_r = partial_trace_dims(p.rho, {p.d_a, p.d_r}, {1});
  return p;
}

// raw residual: tr_{A2}[(U (x) I_R) rho (U (x) I_R)^dag] on (A1, R)
ComplexMatrix residual_matrix(const ComplexMatrix &rho, Eigen::Index d_r,
                              const ComplexMatrix &u_full,
                              const BipartiteSplit &split) {
  const ComplexMatrix conj = u_full * rho * u_full.adjoint();
  return partial_trace_dims(conj, {split.d_a1, split.d_a2, d_r}, {0, 2});
}

} // namespace

DensityOperator decouple_residual(const DensityOperator &rho_ar,
                                  const ComplexMatrix &u,
                                  const BipartiteSplit &split) {
  const ArPieces p = ar_pieces(rho_ar, split);
  if (u.rows() != p.d_a || u.cols() != p.d_a)
    throw InvariantError("decouple_residual: U must act on A");
  const ComplexMatrix u_full = tensor(u, ComplexMatrix::Identity(p.d_r, p.d_r));
  ComplexMatrix res = residual_matrix(p.rho, p.d_r, u_full, split);
  return DensityOperator(std::move(res),
                         SystemLayout({"A1", "R"}, {split.d_a1, p.d_r}));
}

AvgDistance avg_decoupling_distance(const DensityOperator &rho_ar,
                                    const UnitaryEnsemble &ens,
                                    const BipartiteSplit &split, int threads) {
  const ArPieces p = ar_pieces(rho_ar, split);
  if (ens.dim != p.d_a)
    throw InvariantError("avg_decoupling_distance: ensemble dimension mismatch");
  const ComplexMatrix eye_r = ComplexMatrix::Identity(p.d_r, p.d_r);
  const ComplexMatrix target =
      tensor(ComplexMatrix::Identity(split.d_a1, split.d_a1) /
                 static_cast<double>(split.d_a1),
             p.rho_r);
  const double target_tr = target.trace().real();

  struct Stats {
    double weighted = 0.0;
    double sum = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = 0.0;
  };
  Stats zero;
  Stats total = blocked_reduce(
      ens.size(), 64, threads, zero,
      [&](std::size_t i, Stats &acc) {
        const ComplexMatrix u_full = tensor(ens.unitaries[i], eye_r);
        const ComplexMatrix res = residual_matrix(p.rho, p.d_r, u_full, split);
        const double dist = trace_norm(res - target) +
                            std::abs(res.trace().real() - target_tr);
        acc.weighted += ens.probs[i] * dist;
        acc.sum += dist;
        acc.min = std::min(acc.min, dist);
        acc.max = std::max(acc.max, dist);
      },
      [](Stats &acc, const Stats &part) {
        acc.weighted += part.weighted;
        acc.sum += part.sum;
        acc.min = std::min(acc.min, part.min);
        acc.max = std::max(acc.max, part.max);
      });

  AvgDistance out;
  out.average = total.weighted;
  out.min = total.min;
  out.max = total.max;
  out.mean = total.sum / static_cast<double>(ens.size());
  return out;
}

ConditionCheck theorem1_condition(const DensityOperator &rho_ar,
                                  const BipartiteSplit &split, double eps,
                                  double delta, const SmoothOptions &opts) {
  if (eps <= 0.0) throw InvariantError("theorem1_condition: eps must be positive");
  if (delta < 0.0)
    throw InvariantError("theorem1_condition: delta must be nonnegative");
  const ArPieces p = ar_pieces(rho_ar, split);

  const SmoothingResult sm = smooth_h_min(rho_ar, {"A"}, eps, opts);
  const double d_a = static_cast<double>(p.d_a);
  const double lhs = std::log2(static_cast<double>(split.d_a1));
  const double correction =
      std::log2(eps) -
      0.5 * std::log2(1.0 + 3.0 * (d_a * d_a / static_cast<double>(split.d_a1)) *
                                delta);
  const double rhs = 0.5 * (sm.value_bits + std::log2(d_a)) + correction;

  ConditionCheck out;
  out.h_min_eps_bits = sm.value_bits;
  out.slack_bits = rhs - lhs;
  out.holds = out.slack_bits >= 0.0;
  return out;
}

double verify_lemma1(const UnitaryEnsemble &ens, const BipartiteSplit &split,
                     double delta_used, int threads) {
  const Eigen::Index d_a = split.d_a();
  if (ens.dim != d_a)
    throw InvariantError("verify_lemma1: ensemble dimension mismatch");
  if (d_a > 4)
    throw InvariantError("verify_lemma1: d_A > 4 exceeds the dimension guard");
  const Eigen::Index dd = d_a * d_a;

  // I_{A2A2'} (x) F_{A1A1'} embedded into the fixed ordering A1 A2 A1' A2':
  // natural on (A1, A1', A2, A2') then permuted.
  const ComplexMatrix natural =
      tensor(swap_operator(split.d_a1),
             ComplexMatrix::Identity(split.d_a2 * split.d_a2,
                                     split.d_a2 * split.d_a2));
  const ComplexMatrix embedded = permute_systems(
      natural, {split.d_a1, split.d_a1, split.d_a2, split.d_a2}, {0, 2, 1, 3});

  const ComplexMatrix zero = ComplexMatrix::Zero(dd, dd);
  const ComplexMatrix averaged = blocked_sum(
      ens.size(), 64, threads, zero, [&](std::size_t i, ComplexMatrix &acc) {
        const ComplexMatrix u2 = tensor(ens.unitaries[i], ens.unitaries[i]);
        acc += ens.probs[i] * (u2.adjoint() * embedded * u2);
      });

  ComplexMatrix m =
      (1.0 / static_cast<double>(split.d_a1)) * ComplexMatrix::Identity(dd, dd) +
      (1.0 / static_cast<double>(split.d_a2)) * swap_operator(d_a) +
      (static_cast<double>(d_a) * delta_used) * ComplexMatrix::Identity(dd, dd) -
      averaged;
  m = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double verify_lemma2(const UnitaryEnsemble &ens, const DensityOperator &rho_ar,
                     const BipartiteSplit &split, double delta_used,
                     int threads) {
  const ArPieces p = ar_pieces(rho_ar, split);
  if (ens.dim != p.d_a)
    throw InvariantError("verify_lemma2: ensemble dimension mismatch");
  const ComplexMatrix eye_r = ComplexMatrix::Identity(p.d_r, p.d_r);

  const double lhs = blocked_sum(
      ens.size(), 64, threads, 0.0, [&](std::size_t i, double &acc) {
        const ComplexMatrix u_full = tensor(ens.unitaries[i], eye_r);
        const ComplexMatrix res = residual_matrix(p.rho, p.d_r, u_full, split);
        acc += ens.probs[i] * (res * res).trace().real();
      });

  const double pur_r = (p.rho_r * p.rho_r).trace().real();
  const double pur_ar = (p.rho * p.rho).trace().real();
  const double rhs = pur_r / static_cast<double>(split.d_a1) +
                     pur_ar / static_cast<double>(split.d_a2) +
                     static_cast<double>(p.d_a) * delta_used * pur_r;
  return rhs - lhs;
}

DecouplingReport run_experiment(const DensityOperator &rho_ar,
                                const UnitaryEnsemble &ens,
                                const BipartiteSplit &split, double eps,
                                int threads, const SmoothOptions &opts) {
  DecouplingReport report;
  report.eps = eps;
  report.bound = 5.0 * eps;
  report.element_count = ens.size();
  report.ensemble_delta = delta_bounds(ens, threads);

  const ConditionCheck check =
      theorem1_condition(rho_ar, split, eps, report.ensemble_delta.upper, opts);
  report.condition_holds = check.holds;
  report.condition_slack = check.slack_bits;

  const AvgDistance avg = avg_decoupling_distance(rho_ar, ens, split, threads);
  report.empirical_average = avg.average;
  report.per_element_min = avg.min;
  report.per_element_max = avg.max;
  report.per_element_mean = avg.mean;
  return report;
}

} // namespace qdec
