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

#include <cstdint>

#include "qdec/linalg.hpp"

namespace qdec {

// Sub-normalized density operator: PSD within kPsdTol, 0 < tr <= 1 + 1e-12.
class DensityOperator {
public:
  DensityOperator(ComplexMatrix matrix, SystemLayout layout);

  const ComplexMatrix &matrix() const { return matrix_; }
  const SystemLayout &layout() const { return layout_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  double trace_mass() const { return trace_mass_; }

  // Marginal on `keep` (original subsystem order preserved).
  DensityOperator marginal(const std::vector<std::string> &keep) const;

private:
  ComplexMatrix matrix_;
  SystemLayout layout_;
  double trace_mass_;
};

class PureState {
public:
  PureState(ComplexVector amplitudes, SystemLayout layout);

  const ComplexVector &amplitudes() const { return amplitudes_; }
  const SystemLayout &layout() const { return layout_; }
  Eigen::Index dim() const { return amplitudes_.size(); }

  DensityOperator to_density() const;
  DensityOperator marginal(const std::vector<std::string> &keep) const;

private:
  ComplexVector amplitudes_;
  SystemLayout layout_;
};

// ||rho - tau||_1 + |tr rho - tr tau|.
double gen_trace_distance(const DensityOperator &rho, const DensityOperator &tau);

// tr sqrt(sqrt(rho) tau sqrt(rho)) + sqrt((1 - tr rho)(1 - tr tau)).
double gen_fidelity(const DensityOperator &rho, const DensityOperator &tau);

// sqrt(1 - F^2), F the generalized fidelity.
double purified_distance(const DensityOperator &rho, const DensityOperator &tau);

// true iff purified_distance(candidate, center) <= eps + 1e-12; 0 <= eps <= 1.
bool in_eps_ball(const DensityOperator &candidate, const DensityOperator &center,
                 double eps);

DensityOperator maximally_mixed(Eigen::Index d, const std::string &label = "A");

// Hilbert-Schmidt-induced random state of the requested rank (partial trace of
// a Haar-random pure state on a rank-dimensional ancilla). Deterministic per seed.
DensityOperator random_state(Eigen::Index d, Eigen::Index rank, std::uint64_t seed,
                             const std::string &label = "A");

// Haar-random unit vector on A (x) B (x) R, labels {"A","B","R"}.
PureState random_pure_tripartite(Eigen::Index d_a, Eigen::Index d_b,
                                 Eigen::Index d_r, std::uint64_t seed);

ComplexVector random_unit_vector(Eigen::Index d, std::uint64_t seed);

} // namespace qdec
