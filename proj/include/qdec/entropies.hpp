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

#include <optional>

#include "qdec/states.hpp"

namespace qdec {

inline constexpr double kInfBits = std::numeric_limits<double>::infinity();

// Sandwiched alpha-Renyi divergence, base-2, with the 1/tr[rho] prefactor and
// Moore-Penrose powers on supp(sigma). +inf when rho is orthogonal to sigma,
// or when alpha > 1 and supp(rho) is not contained in supp(sigma).
// alpha in (0,1) u (1,inf); alpha == 1 is relative_entropy's job.
double renyi_divergence(const ComplexMatrix &rho, const ComplexMatrix &sigma,
                        double alpha);
double renyi_divergence(const DensityOperator &rho, const DensityOperator &sigma,
                        double alpha);

// alpha = 2 member of the family.
double collision_divergence(const ComplexMatrix &rho, const ComplexMatrix &sigma);

// tr[rho (log rho - log sigma)] on supports; +inf on support violation.
double relative_entropy(const ComplexMatrix &rho, const ComplexMatrix &sigma);
double relative_entropy(const DensityOperator &rho, const DensityOperator &sigma);

// rho regrouped so the conditioned systems come first (A block leftmost).
struct ConditionalSplit {
  ComplexMatrix rho;  // permuted to (A..., B...) ordering
  Eigen::Index d_a = 1;
  Eigen::Index d_b = 1;
};
ConditionalSplit conditional_split(const DensityOperator &rho,
                                   const std::vector<std::string> &a_labels);

// H_alpha(A|B)_{rho|sigma} = -D_alpha(rho_AB || I_A (x) sigma_B).
double cond_entropy_rel(const DensityOperator &rho,
                        const std::vector<std::string> &a_labels,
                        const ComplexMatrix &sigma_b, double alpha);

struct CondEntropyResult {
  double value_bits = 0.0;
  ComplexMatrix sigma; // optimizing sigma_B
  int evaluations = 0;
  double residual = 0.0;
};

struct CondEntropyOptions {
  std::uint64_t seed = 0;
  int evals_per_start = 0; // 0: scaled default
  int random_starts = 2;
  std::optional<ComplexMatrix> warm_sigma; // extra start
};

// H_alpha(A|B)_rho = sup over normalized sigma_B of cond_entropy_rel.
CondEntropyResult cond_renyi_entropy(const DensityOperator &rho,
                                     const std::vector<std::string> &a_labels,
                                     double alpha,
                                     const CondEntropyOptions &opts = {});

struct HminResult {
  double value_bits = 0.0;  // -log2 tr X at the returned strictly feasible X
  ComplexMatrix x_witness;  // X on B with I_A (x) X >= rho
  int newton_steps = 0;
  double gap = 0.0;         // certified bound on tr X - optimum
};

// min tr X s.t. I_A (x) X >= rho_AB, via a log-barrier Newton method.
// The returned value is a certified lower bound on H_min (feasible witness).
HminResult h_min(const DensityOperator &rho,
                 const std::vector<std::string> &a_labels);
HminResult h_min_program(const ComplexMatrix &rho_perm, Eigen::Index d_a,
                         Eigen::Index d_b);

// H_max(A|B) = H_{1/2}(A|B).
CondEntropyResult h_max(const DensityOperator &rho,
                        const std::vector<std::string> &a_labels,
                        const CondEntropyOptions &opts = {});

// log2 of the minimal support size reachable by eigenvalue truncation within
// the purified-distance eps-ball (truncated state stays sub-normalized).
double h0_eps(const DensityOperator &rho, double eps);

double von_neumann(const DensityOperator &rho);

// H(A|B) = H(AB) - H(B), B the complement of a_labels.
double cond_von_neumann(const DensityOperator &rho,
                        const std::vector<std::string> &a_labels);

// I(A:B) = H(A) + H(B) - H(AB), B the complement of a_labels.
double mutual_information(const DensityOperator &rho,
                          const std::vector<std::string> &a_labels);

} // namespace qdec
