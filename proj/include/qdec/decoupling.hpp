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

#include "qdec/designs.hpp"
#include "qdec/smoothing.hpp"
#include "qdec/states.hpp"

namespace qdec {

// A = A1 A2 with A1 leftmost.
struct BipartiteSplit {
  Eigen::Index d_a1 = 1;
  Eigen::Index d_a2 = 1;
  Eigen::Index d_a() const { return d_a1 * d_a2; }
};

struct ConditionCheck {
  bool holds = false;
  double slack_bits = 0.0;     // RHS - LHS of the Theorem 1 hypothesis
  double h_min_eps_bits = 0.0; // certified lower bound used
};

struct DecouplingReport {
  double empirical_average = 0.0; // ensemble-averaged generalized trace distance
  double bound = 0.0;             // 5 eps
  bool condition_holds = false;
  double condition_slack = 0.0; // bits
  double per_element_min = 0.0;
  double per_element_max = 0.0;
  double per_element_mean = 0.0;
  DeltaEstimate ensemble_delta;
  double eps = 0.0;
  std::size_t element_count = 0;
};

// tr_{A2}[(U (x) I_R) rho_AR (U (x) I_R)^dag] on A1R. rho_AR carries labels
// {"A","R"}; U acts on A alone.
DensityOperator decouple_residual(const DensityOperator &rho_ar,
                                  const ComplexMatrix &u,
                                  const BipartiteSplit &split);

struct AvgDistance {
  double average = 0.0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0; // unweighted per-element mean
};

// sum_i p_i || tr_{A2}(U_i rho U_i^dag) - tau_{A1} (x) rho_R ||_gen.
AvgDistance avg_decoupling_distance(const DensityOperator &rho_ar,
                                    const UnitaryEnsemble &ens,
                                    const BipartiteSplit &split, int threads = 1);

// log2 d_A1 <= 1/2 [Hmin^eps(A|R) + log2 d_A] + log2(eps / sqrt(1 + 3 (d_A^2/d_A1) delta)),
// evaluated with the certified lower bound on Hmin^eps (a true condition may be
// reported false, never the reverse).
ConditionCheck theorem1_condition(const DensityOperator &rho_ar,
                                  const BipartiteSplit &split, double eps,
                                  double delta, const SmoothOptions &opts = {});

// Minimum eigenvalue of
//   (1/d_A1) I + (1/d_A2) F_AA' + d_A delta I - sum_i p_i (U(x)U)^dag (I_{A2A2'} (x) F_{A1A1'}) (U(x)U).
double verify_lemma1(const UnitaryEnsemble &ens, const BipartiteSplit &split,
                     double delta_used, int threads = 1);

// RHS - LHS of the (squared-reading) Lemma 2 trace inequality.
double verify_lemma2(const UnitaryEnsemble &ens, const DensityOperator &rho_ar,
                     const BipartiteSplit &split, double delta_used,
                     int threads = 1);

DecouplingReport run_experiment(const DensityOperator &rho_ar,
                                const UnitaryEnsemble &ens,
                                const BipartiteSplit &split, double eps,
                                int threads = 1, const SmoothOptions &opts = {});

} // namespace qdec
