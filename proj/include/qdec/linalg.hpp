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

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdec/errors.hpp"

namespace qdec {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Repo-wide numeric conventions. All logarithms are base 2 (bits/qubits).
inline constexpr double kHermTol = 1e-10;        // max |M - M^dag| gate for hermitization
inline constexpr double kPsdTol = 1e-9;          // eigenvalues below -kPsdTol: not PSD
inline constexpr double kRankTolFactor = 1e-10;  // support cut: ev > factor * ev_max

// Ordered multipartite labeling of a Hilbert space. The first-listed
// subsystem is the leftmost Kronecker factor (most significant index).
struct SystemLayout {
  std::vector<std::string> labels;
  std::vector<Eigen::Index> dims;

  SystemLayout() = default;
  SystemLayout(std::vector<std::string> labels_, std::vector<Eigen::Index> dims_);

  Eigen::Index dim() const;
  std::size_t size() const { return labels.size(); }
  std::size_t index_of(const std::string &label) const;
  bool has_label(const std::string &label) const;
  Eigen::Index dim_of(const std::vector<std::string> &subset) const;
  // Layout restricted to `keep`, preserving the original subsystem order.
  SystemLayout restricted(const std::vector<std::string> &keep) const;
};

SystemLayout single_system(const std::string &label, Eigen::Index d);

// Kronecker product, `a` as the leftmost (most significant) factor.
ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix tensor_all(const std::vector<ComplexMatrix> &factors);

// Trace out every subsystem not listed in `keep_indices` (sorted ascending).
// Kept subsystems retain their original relative order.
ComplexMatrix partial_trace_dims(const ComplexMatrix &m,
                                 const std::vector<Eigen::Index> &dims,
                                 const std::vector<std::size_t> &keep_indices);

ComplexMatrix partial_trace(const ComplexMatrix &m, const SystemLayout &layout,
                            const std::vector<std::string> &keep);

// Reorders tensor factors: target slot k holds source subsystem perm[k].
ComplexMatrix permute_systems(const ComplexMatrix &m,
                              const std::vector<Eigen::Index> &dims,
                              const std::vector<std::size_t> &perm);
ComplexVector permute_systems_vec(const ComplexVector &v,
                                  const std::vector<Eigen::Index> &dims,
                                  const std::vector<std::size_t> &perm);

ComplexMatrix dagger(const ComplexMatrix &m);
double hermiticity_residual(const ComplexMatrix &m);

struct HermEig {
  RealVector values;     // ascending
  ComplexMatrix vectors; // columns
};

// Symmetrizes (M+M^dag)/2 when the hermiticity residual is within kHermTol,
// errors otherwise, then eigendecomposes.
HermEig herm_eig(const ComplexMatrix &m);

// Spectral power on the support (Moore-Penrose convention): eigenvalues above
// the relative rank tolerance are raised to p, the rest map to 0 even for
// negative p. Errors when an eigenvalue falls below -kPsdTol.
ComplexMatrix mat_pow_psd(const ComplexMatrix &m, double p);
ComplexMatrix mat_sqrt_psd(const ComplexMatrix &m);

double trace_norm(const ComplexMatrix &m); // Schatten-1
double two_norm(const ComplexMatrix &m);   // Schatten-2 (Frobenius)
double op_norm(const ComplexMatrix &m);    // Schatten-inf

// Flip F on H_d (x) H_d with F|ij> = |ji>; F^2 = I, tr F = d.
ComplexMatrix swap_operator(Eigen::Index d);

// Column-stacking vectorization and its inverse.
ComplexVector vec(const ComplexMatrix &m);
ComplexMatrix unvec(const ComplexVector &v, Eigen::Index rows, Eigen::Index cols);

inline double log2_safe(double x) { return std::log2(x); }

} // namespace qdec
