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

#include "qdec/designs.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "qdec/parallel.hpp"
#include "qdec/rng.hpp"

namespace qdec {

void UnitaryEnsemble::validate() const {
  if (probs.size() != unitaries.size())
    throw InvariantError("UnitaryEnsemble: probs/unitaries size mismatch");
  if (unitaries.empty()) throw InvariantError("UnitaryEnsemble: empty ensemble");
  double total = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw InvariantError("UnitaryEnsemble: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw InvariantError("UnitaryEnsemble: probabilities sum to " +
                         std::to_string(total));
  for (const auto &u : unitaries) {
    if (u.rows() != dim || u.cols() != dim)
      throw InvariantError("UnitaryEnsemble: element dimension mismatch");
    const double dev =
        (u.adjoint() * u - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (dev > 1e-10)
      throw InvariantError("UnitaryEnsemble: element is not unitary (dev " +
                           std::to_string(dev) + ")");
  }
}

ComplexMatrix haar_sample(Eigen::Index d, std::uint64_t seed) {
  if (d < 1) throw InvariantError("haar_sample: dimension must be >= 1");
  Rng rng(seed);
  ComplexMatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.cgauss();
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex rj = r(j, j);
    const double mag = std::abs(rj);
    const Complex phase = mag > 0.0 ? rj / mag : Complex(1.0, 0.0);
    q.col(j) /= phase;
  }
  return q;
}

UnitaryEnsemble haar_ensemble(Eigen::Index d, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InvariantError("haar_ensemble: need samples >= 1");
  UnitaryEnsemble ens;
  ens.dim = d;
  ens.probs.assign(static_cast<std::size_t>(n_samples),
                   1.0 / static_cast<double>(n_samples));
  ens.unitaries.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i)
    ens.unitaries.push_back(haar_sample(d, Rng::mix(seed, static_cast<std::uint64_t>(i))));
  return ens;
}

UnitaryEnsemble singleton_ensemble(const ComplexMatrix &u) {
  UnitaryEnsemble ens;
  ens.dim = u.rows();
  ens.probs = {1.0};
  ens.unitaries = {u};
  ens.validate();
  return ens;
}

namespace {

struct PauliBasis {
  std::vector<ComplexMatrix> ops; // 4^n Pauli strings, I first
};

PauliBasis pauli_basis(int n) {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  ComplexMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  z << 1, 0, 0, -1;
  const std::vector<ComplexMatrix> singles{i2, x, y, z};
  PauliBasis basis;
  const int count = 1 << (2 * n);
  basis.ops.reserve(static_cast<std::size_t>(count));
  for (int code = 0; code < count; ++code) {
    ComplexMatrix m = ComplexMatrix::Identity(1, 1);
    int c = code;
    std::vector<int> digits(static_cast<std::size_t>(n));
    for (int q = n - 1; q >= 0; --q) {
      digits[static_cast<std::size_t>(q)] = c % 4;
      c /= 4;
    }
    for (int q = 0; q < n; ++q) m = tensor(m, singles[static_cast<std::size_t>(digits[static_cast<std::size_t>(q)])]);
    basis.ops.push_back(std::move(m));
  }
  return basis;
}

// Exact equality-mod-phase key: conjugation image of each Pauli generator,
// identified as (pauli index, sign). Trace overlaps are +-1 vs 0 with O(1)
// gaps, so the identification is immune to accumulated roundoff.
std::uint64_t clifford_key(const ComplexMatrix &u, const PauliBasis &basis,
                           const std::vector<std::size_t> &generator_paulis,
                           Eigen::Index d) {
  std::uint64_t key = 0;
  for (std::size_t gp : generator_paulis) {
    const ComplexMatrix img = u * basis.ops[gp] * u.adjoint();
    bool found = false;
    for (std::size_t idx = 0; idx < basis.ops.size(); ++idx) {
      const Complex c = (basis.ops[idx].adjoint() * img).trace() / static_cast<double>(d);
      if (std::abs(std::abs(c) - 1.0) < 1e-6) {
        if (std::abs(std::abs(c.real()) - 1.0) > 1e-6)
          throw InvariantError("clifford_key: non-real Pauli conjugation sign");
        const std::uint64_t sign = c.real() > 0.0 ? 0u : 1u;
        key = key * (2 * basis.ops.size()) + 2 * idx + sign;
        found = true;
        break;
      }
    }
    if (!found)
      throw InvariantError("clifford_key: element does not normalize the Pauli group");
  }
  return key;
}

ComplexMatrix canonical_phase(ComplexMatrix u) {
  for (Eigen::Index r = 0; r < u.rows(); ++r)
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      const double mag = std::abs(u(r, c));
      if (mag > 1e-6) {
        u *= std::conj(u(r, c)) / mag;
        return u;
      }
    }
  return u;
}

} // namespace

UnitaryEnsemble clifford_group(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 2)
    throw InvariantError("clifford_group: n_qubits must be 1 or 2");
  const Eigen::Index d = Eigen::Index(1) << n_qubits;
  const PauliBasis basis = pauli_basis(n_qubits);

  ComplexMatrix h(2, 2), s(2, 2);
  h << 1, 1, 1, -1;
  h *= M_SQRT1_2;
  s << 1, 0, 0, Complex(0, 1);
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);

  std::vector<ComplexMatrix> gens;
  std::vector<std::size_t> generator_paulis; // X_q, Z_q codes in the basis
  if (n_qubits == 1) {
    gens = {h, s};
    generator_paulis = {1, 3}; // X, Z
  } else {
    ComplexMatrix cnot01(4, 4), cnot10(4, 4);
    cnot01 << 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0;
    cnot10 << 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0;
    gens = {tensor(h, i2), tensor(i2, h), tensor(s, i2), tensor(i2, s),
            cnot01, cnot10};
    // codes: qubit0 digit is the most significant base-4 digit
    generator_paulis = {4, 12, 1, 3}; // X (x) I, Z (x) I, I (x) X, I (x) Z
  }

  std::unordered_map<std::uint64_t, std::size_t> seen;
  std::vector<ComplexMatrix> elements;
  std::deque<ComplexMatrix> frontier;

  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  seen.emplace(clifford_key(id, basis, generator_paulis, d), 0);
  elements.push_back(id);
  frontier.push_back(id);

  while (!frontier.empty()) {
    const ComplexMatrix u = std::move(frontier.front());
    frontier.pop_front();
    for (const auto &g : gens) {
      ComplexMatrix v = g * u;
      const std::uint64_t key = clifford_key(v, basis, generator_paulis, d);
      if (seen.emplace(key, elements.size()).second) {
        v = canonical_phase(std::move(v));
        elements.push_back(v);
        frontier.push_back(v);
      }
    }
  }

  UnitaryEnsemble ens;
  ens.dim = d;
  ens.unitaries = std::move(elements);
  ens.probs.assign(ens.unitaries.size(), 1.0 / static_cast<double>(ens.unitaries.size()));
  return ens;
}

UnitaryEnsemble random_circuit_ensemble(int n_qubits, int depth, int samples,
                                        std::uint64_t seed) {
  if (n_qubits < 2)
    throw InvariantError("random_circuit_ensemble: need n_qubits >= 2");
  if (depth < 1) throw InvariantError("random_circuit_ensemble: need depth >= 1");
  if (samples < 1)
    throw InvariantError("random_circuit_ensemble: need samples >= 1");
  const Eigen::Index d = Eigen::Index(1) << n_qubits;

  UnitaryEnsemble ens;
  ens.dim = d;
  ens.probs.assign(static_cast<std::size_t>(samples),
                   1.0 / static_cast<double>(samples));
  ens.unitaries.reserve(static_cast<std::size_t>(samples));

  std::uint64_t gate_counter = 0;
  for (int sample = 0; sample < samples; ++sample) {
    ComplexMatrix u = ComplexMatrix::Identity(d, d);
    for (int layer = 0; layer < depth; ++layer) {
      const int first = (layer % 2 == 0) ? 0 : 1;
      for (int q = first; q + 1 < n_qubits; q += 2) {
        const ComplexMatrix gate =
            haar_sample(4, Rng::mix(seed, 0x9c1 + gate_counter++));
        ComplexMatrix full = ComplexMatrix::Identity(1, 1);
        if (q > 0) full = tensor(full, ComplexMatrix::Identity(Eigen::Index(1) << q,
                                                               Eigen::Index(1) << q));
        full = tensor(full, gate);
        const int rest = n_qubits - q - 2;
        if (rest > 0)
          full = tensor(full, ComplexMatrix::Identity(Eigen::Index(1) << rest,
                                                      Eigen::Index(1) << rest));
        u = full * u;
      }
    }
    ens.unitaries.push_back(std::move(u));
  }
  return ens;
}

ComplexMatrix haar_twirl(const ComplexMatrix &x, Eigen::Index d) {
  if (x.rows() != d * d || x.cols() != d * d)
    throw InvariantError("haar_twirl: input must be d^2 x d^2");
  if (d == 1) return x; // one-dimensional twirl is the identity map
  const ComplexMatrix f = swap_operator(d);
  const Complex t = x.trace();
  const Complex fx = (f * x).trace();
  const double dd = static_cast<double>(d);
  const double den = dd * (dd * dd - 1.0);
  const Complex a = (dd * t - fx) / den;
  const Complex b = (dd * fx - t) / den;
  return a * ComplexMatrix::Identity(d * d, d * d) + b * f;
}

ComplexMatrix ensemble_twirl(const UnitaryEnsemble &ens, const ComplexMatrix &x,
                             int threads) {
  const Eigen::Index d = ens.dim;
  if (x.rows() != d * d || x.cols() != d * d)
    throw InvariantError("ensemble_twirl: input must be d^2 x d^2");
  const ComplexMatrix zero = ComplexMatrix::Zero(d * d, d * d);
  return blocked_sum(
      ens.size(), 64, threads, zero, [&](std::size_t i, ComplexMatrix &acc) {
        const ComplexMatrix u2 = tensor(ens.unitaries[i], ens.unitaries[i]);
        acc += ens.probs[i] * (u2 * x * u2.adjoint());
      });
}

ComplexMatrix moment_superoperator(const UnitaryEnsemble &ens, int threads) {
  if (ens.dim > 4)
    throw InvariantError("moment_superoperator: d > 4 exceeds the memory guard");
  const Eigen::Index dd = ens.dim * ens.dim;
  const ComplexMatrix zero = ComplexMatrix::Zero(dd * dd, dd * dd);
  return blocked_sum(
      ens.size(), 64, threads, zero, [&](std::size_t i, ComplexMatrix &acc) {
        const ComplexMatrix u2 = tensor(ens.unitaries[i], ens.unitaries[i]);
        acc += ens.probs[i] * tensor(u2.conjugate(), u2);
      });
}

ComplexMatrix haar_moment_superoperator(Eigen::Index d) {
  if (d > 4)
    throw InvariantError("haar_moment_superoperator: d > 4 exceeds the memory guard");
  const Eigen::Index dd = d * d;
  if (d == 1) return ComplexMatrix::Identity(1, 1);
  const ComplexVector vi = vec(ComplexMatrix::Identity(dd, dd));
  const ComplexVector vf = vec(swap_operator(d));
  const double den = static_cast<double>(d) * (static_cast<double>(d * d) - 1.0);
  ComplexMatrix s = vi * (static_cast<double>(d) * vi - vf).adjoint() +
                    vf * (static_cast<double>(d) * vf - vi).adjoint();
  return s / den;
}

DeltaEstimate delta_bounds(const UnitaryEnsemble &ens, int threads) {
  const Eigen::Index d = ens.dim;
  if (d > 4)
    throw InvariantError("delta_bounds: d > 4 exceeds the materialized-route guard");
  const Eigen::Index bigd = d * d; // input dimension of the 2-copy twirl
  const double sqrt_bigd = std::sqrt(static_cast<double>(bigd));

  // J_ens = sum_i p_i v_i v_i^dag with v_i = (U_i (x) U_i (x) I)|Omega>
  const ComplexMatrix zero = ComplexMatrix::Zero(bigd * bigd, bigd * bigd);
  ComplexMatrix j_ens = blocked_sum(
      ens.size(), 64, threads, zero, [&](std::size_t i, ComplexMatrix &acc) {
        const ComplexMatrix u2 = tensor(ens.unitaries[i], ens.unitaries[i]);
        ComplexVector v(bigd * bigd);
        for (Eigen::Index a = 0; a < bigd; ++a)
          for (Eigen::Index b = 0; b < bigd; ++b)
            v(a * bigd + b) = u2(a, b) / sqrt_bigd;
        acc += ens.probs[i] * (v * v.adjoint());
      });

  // J_haar block-by-block from the closed-form twirl of |i><j|
  ComplexMatrix j_haar = ComplexMatrix::Zero(bigd * bigd, bigd * bigd);
  const ComplexMatrix f = swap_operator(d);
  const double den = static_cast<double>(d) * (static_cast<double>(d * d) - 1.0);
  for (Eigen::Index i = 0; i < bigd; ++i)
    for (Eigen::Index j = 0; j < bigd; ++j) {
      const double t = i == j ? 1.0 : 0.0;
      const Complex fx = f(j, i);
      const Complex a = (static_cast<double>(d) * t - fx) / den;
      const Complex b = (static_cast<double>(d) * fx - t) / den;
      for (Eigen::Index r = 0; r < bigd; ++r) {
        j_haar(r * bigd + i, r * bigd + j) += a / static_cast<double>(bigd);
        for (Eigen::Index c = 0; c < bigd; ++c)
          if (f(r, c) != Complex(0.0, 0.0))
            j_haar(r * bigd + i, c * bigd + j) +=
                b * f(r, c) / static_cast<double>(bigd);
      }
    }

  const double lower = trace_norm(j_ens - j_haar);
  DeltaEstimate est{lower, static_cast<double>(bigd) * lower};
  return est;
}

bool is_exact_2design(const UnitaryEnsemble &ens, double tol, int threads) {
  const ComplexMatrix diff =
      moment_superoperator(ens, threads) - haar_moment_superoperator(ens.dim);
  return op_norm(diff) <= tol;
}

UnitaryEnsemble materialize(const EnsembleSpec &spec) {
  switch (spec.kind) {
    case EnsembleSpec::Kind::Clifford:
      return clifford_group(spec.n_qubits);
    case EnsembleSpec::Kind::RandomCircuit:
      return random_circuit_ensemble(spec.n_qubits, spec.depth, spec.samples,
                                     spec.seed);
    case EnsembleSpec::Kind::HaarSamples:
      return haar_ensemble(spec.d, spec.samples, spec.seed);
    case EnsembleSpec::Kind::Explicit: {
      UnitaryEnsemble ens;
      if (spec.elements.empty())
        throw InvariantError("materialize: explicit ensemble has no elements");
      ens.dim = spec.elements.front().second.rows();
      for (const auto &[p, u] : spec.elements) {
        ens.probs.push_back(p);
        ens.unitaries.push_back(u);
      }
      ens.validate();
      return ens;
    }
  }
  throw InvariantError("materialize: unknown ensemble kind");
}

} // namespace qdec
