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
#include <optional>
#include <string>

#include "qdec/linalg.hpp"

namespace qdec {

// Certified bracket on the diamond-norm distance between an ensemble's 2-fold
// twirl and the Haar 2-fold twirl.
struct DeltaEstimate {
  double lower = 0.0;
  double upper = 0.0;
};

// Weighted finite set {(p_i, U_i)} on H_d.
struct UnitaryEnsemble {
  Eigen::Index dim = 0;
  std::vector<double> probs;
  std::vector<ComplexMatrix> unitaries;

  std::size_t size() const { return unitaries.size(); }
  void validate() const; // probs sum to 1 (1e-10), unitarity (1e-10)
};

// Haar sample via QR of a complex Ginibre matrix with the R-diagonal phase
// correction. Deterministic per seed.
ComplexMatrix haar_sample(Eigen::Index d, std::uint64_t seed);

UnitaryEnsemble haar_ensemble(Eigen::Index d, int n_samples, std::uint64_t seed);
UnitaryEnsemble singleton_ensemble(const ComplexMatrix &u);

// Full n-qubit Clifford group modulo global phase (24 / 11520 elements),
// generated by closure under {H, S on each qubit, CNOT both orientations}.
UnitaryEnsemble clifford_group(int n_qubits);

// 1D brickwork of independent Haar 2-qubit gates on alternating even/odd
// nearest-neighbor pairs, `samples` circuits with uniform weights.
UnitaryEnsemble random_circuit_ensemble(int n_qubits, int depth, int samples,
                                        std::uint64_t seed);

// Closed-form Haar 2-fold twirl a I + b F via moment matching on (tr, tr F.).
ComplexMatrix haar_twirl(const ComplexMatrix &x, Eigen::Index d);

// sum_i p_i (U (x) U) X (U (x) U)^dag, deterministic blocked reduction.
ComplexMatrix ensemble_twirl(const UnitaryEnsemble &ens, const ComplexMatrix &x,
                             int threads = 1);

// d^4 x d^4 superoperator of the 2-fold twirl in column-stacking convention.
// Memory-guarded to d <= 4.
ComplexMatrix moment_superoperator(const UnitaryEnsemble &ens, int threads = 1);
ComplexMatrix haar_moment_superoperator(Eigen::Index d);

// Choi trace-norm sandwich: lower = ||J||_1, upper = d^2 ||J||_1 with
// J = (Phi (x) id)(|Omega><Omega|), Phi the twirl difference. d <= 4.
DeltaEstimate delta_bounds(const UnitaryEnsemble &ens, int threads = 1);

bool is_exact_2design(const UnitaryEnsemble &ens, double tol, int threads = 1);

// Generative ensemble description (the CLI file schema mirrors this).
struct EnsembleSpec {
  enum class Kind { Clifford, RandomCircuit, HaarSamples, Explicit };
  Kind kind = Kind::Clifford;
  int n_qubits = 1;
  int depth = 1;
  int samples = 1;
  std::uint64_t seed = 0;
  Eigen::Index d = 2; // haar_samples dimension
  std::vector<std::pair<double, ComplexMatrix>> elements; // explicit
};

UnitaryEnsemble materialize(const EnsembleSpec &spec);

} // namespace qdec
