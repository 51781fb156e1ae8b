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

#include "qdec/states.hpp"

#include <algorithm>
#include <cmath>

#include "qdec/rng.hpp"

namespace qdec {

namespace {

void check_same_dim(const DensityOperator &a, const DensityOperator &b,
                    const char *op) {
  if (a.dim() != b.dim())
    throw InvariantError(std::string(op) + ": dimension mismatch");
}

} // namespace

DensityOperator::DensityOperator(ComplexMatrix matrix, SystemLayout layout)
    : matrix_(std::move(matrix)), layout_(std::move(layout)) {
  if (matrix_.rows() != matrix_.cols())
    throw InvariantError("DensityOperator: matrix must be square");
  if (layout_.dim() != matrix_.rows())
    throw InvariantError("DensityOperator: layout dimension mismatch");
  if (hermiticity_residual(matrix_) > kHermTol)
    throw InvariantError("DensityOperator: matrix is not Hermitian");
  matrix_ = 0.5 * (matrix_ + matrix_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix_,
                                                  Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -kPsdTol)
    throw InvariantError("DensityOperator: not PSD (min eigenvalue " +
                         std::to_string(es.eigenvalues()(0)) + ")");
  trace_mass_ = matrix_.trace().real();
  if (trace_mass_ > 1.0 + 1e-12)
    throw InvariantError("DensityOperator: trace " + std::to_string(trace_mass_) +
                         " exceeds 1");
  if (trace_mass_ <= 0.0)
    throw InvariantError("DensityOperator: trace must be positive");
}

DensityOperator DensityOperator::marginal(const std::vector<std::string> &keep) const {
  return DensityOperator(partial_trace(matrix_, layout_, keep),
                         layout_.restricted(keep));
}

PureState::PureState(ComplexVector amplitudes, SystemLayout layout)
    : amplitudes_(std::move(amplitudes)), layout_(std::move(layout)) {
  if (layout_.dim() != amplitudes_.size())
    throw InvariantError("PureState: layout dimension mismatch");
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12)
    throw InvariantError("PureState: amplitudes are not unit norm");
}

DensityOperator PureState::to_density() const {
  return DensityOperator(amplitudes_ * amplitudes_.adjoint(), layout_);
}

DensityOperator PureState::marginal(const std::vector<std::string> &keep) const {
  ComplexMatrix rho = amplitudes_ * amplitudes_.adjoint();
  return DensityOperator(partial_trace(rho, layout_, keep),
                         layout_.restricted(keep));
}

double gen_trace_distance(const DensityOperator &rho, const DensityOperator &tau) {
  check_same_dim(rho, tau, "gen_trace_distance");
  return trace_norm(rho.matrix() - tau.matrix()) +
         std::abs(rho.trace_mass() - tau.trace_mass());
}

double gen_fidelity(const DensityOperator &rho, const DensityOperator &tau) {
  check_same_dim(rho, tau, "gen_fidelity");
  if (rho.matrix() == tau.matrix()) return 1.0; // F(rho, rho) is exactly 1
  const ComplexMatrix root = mat_sqrt_psd(rho.matrix());
  const ComplexMatrix inner = root * tau.matrix() * root;
  const HermEig eig = herm_eig(inner);
  // shared support convention: noise eigenvalues below the rank cut would
  // otherwise contribute sqrt(eps)-scale garbage
  const double ev_max = eig.values.size()
                            ? std::max(0.0, eig.values(eig.values.size() - 1))
                            : 0.0;
  const double cut = kRankTolFactor * ev_max;
  double f = 0.0;
  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values(i) > cut) f += std::sqrt(eig.values(i));
  // max(0, .) absorbs 1e-12-scale negative round-off in the trace defects
  f += std::sqrt(std::max(0.0, 1.0 - rho.trace_mass()) *
                 std::max(0.0, 1.0 - tau.trace_mass()));
  return f;
}

double purified_distance(const DensityOperator &rho, const DensityOperator &tau) {
  const double f = std::clamp(gen_fidelity(rho, tau), 0.0, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - f * f));
}

bool in_eps_ball(const DensityOperator &candidate, const DensityOperator &center,
                 double eps) {
  if (eps < 0.0 || eps > 1.0)
    throw InvariantError("in_eps_ball: eps must lie in [0, 1]");
  return purified_distance(candidate, center) <= eps + 1e-12;
}

DensityOperator maximally_mixed(Eigen::Index d, const std::string &label) {
  if (d < 1) throw InvariantError("maximally_mixed: dimension must be >= 1");
  ComplexMatrix m = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  return DensityOperator(std::move(m), single_system(label, d));
}

ComplexVector random_unit_vector(Eigen::Index d, std::uint64_t seed) {
  Rng rng(seed);
  ComplexVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = rng.cgauss();
  v.normalize();
  return v;
}

DensityOperator random_state(Eigen::Index d, Eigen::Index rank, std::uint64_t seed,
                             const std::string &label) {
  if (rank < 1 || rank > d)
    throw InvariantError("random_state: rank out of range");
  const ComplexVector psi = random_unit_vector(d * rank, seed);
  ComplexMatrix full = psi * psi.adjoint();
  ComplexMatrix rho = partial_trace_dims(full, {d, rank}, {0});
  return DensityOperator(std::move(rho), single_system(label, d));
}

PureState random_pure_tripartite(Eigen::Index d_a, Eigen::Index d_b,
                                 Eigen::Index d_r, std::uint64_t seed) {
  const ComplexVector psi = random_unit_vector(d_a * d_b * d_r, seed);
  return PureState(psi, SystemLayout({"A", "B", "R"}, {d_a, d_b, d_r}));
}

} // namespace qdec
