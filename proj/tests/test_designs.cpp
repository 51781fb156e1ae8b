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

#include <catch2/catch_amalgamated.hpp>

#include "qdec/designs.hpp"
#include "test_util.hpp"

using namespace qdec;
using namespace qdec::test;

TEST_CASE("haar samples", "[designs]") {
  const ComplexMatrix u1 = haar_sample(1, 5);
  REQUIRE(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-12);

  const ComplexMatrix a = haar_sample(3, 7), b = haar_sample(3, 7);
  REQUIRE(max_abs(a - b) == 0.0);
  REQUIRE(max_abs(a.adjoint() * a - ComplexMatrix::Identity(3, 3)) < 1e-12);

  // mean |U_00|^2 = 1/2 at d = 2, 1e4 samples, 3 standard errors
  const int n = 10000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix u = haar_sample(2, 10000 + i);
    const double x = std::norm(u(0, 0));
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  REQUIRE(std::abs(mean - 0.5) <= 3.0 * se);
}

TEST_CASE("haar twirl closed form", "[designs]") {
  const Eigen::Index d = 2;
  const ComplexMatrix f = swap_operator(d);
  REQUIRE(max_abs(haar_twirl(f, d) - f) < 1e-14);
  const ComplexMatrix i4 = ComplexMatrix::Identity(4, 4);
  REQUIRE(max_abs(haar_twirl(i4, d) - i4) < 1e-14);

  // idempotence
  const ComplexMatrix x = random_complex(4, 4, 11);
  REQUIRE(max_abs(haar_twirl(haar_twirl(x, d), d) - haar_twirl(x, d)) < 1e-10);

  // coefficients re-derived from the 2x2 moment-matching system
  // tr(E) = a d^2 + b d, tr(FE) = a d + b d^2
  {
    const Complex t = x.trace();
    const Complex fx = (f * x).trace();
    Eigen::Matrix2cd m;
    m << Complex(4, 0), Complex(2, 0), Complex(2, 0), Complex(4, 0);
    Eigen::Vector2cd rhs(t, fx);
    const Eigen::Vector2cd ab = m.colPivHouseholderQr().solve(rhs);
    const ComplexMatrix expect = ab(0) * i4 + ab(1) * f;
    REQUIRE(max_abs(haar_twirl(x, d) - expect) < 1e-12);
  }

  // image lies in span{I, F}
  const ComplexMatrix tw = haar_twirl(random_complex(4, 4, 12), d);
  // project onto the span via the same moment matching and compare
  {
    const Complex t = tw.trace();
    const Complex fx = (f * tw).trace();
    const Complex a = (2.0 * t - fx) / 6.0;
    const Complex b = (2.0 * fx - t) / 6.0;
    REQUIRE(max_abs(tw - (a * i4 + b * f)) < 1e-10);
  }

  // Monte-Carlo cross-check (aggregate statistic, small N here; the
  // acceptance suite runs the full 1e5-sample version)
  const ComplexMatrix xr = random_complex(4, 4, 13);
  const int n = 20000;
  ComplexMatrix mean = ComplexMatrix::Zero(4, 4);
  double var_sum = 0.0;
  std::vector<ComplexMatrix> terms;
  terms.reserve(n);
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix u = haar_sample(2, 40000 + i);
    const ComplexMatrix u2 = tensor(u, u);
    terms.push_back(u2 * xr * u2.adjoint());
    mean += terms.back();
  }
  mean /= n;
  for (const auto &term : terms) var_sum += (term - mean).squaredNorm();
  const double se_frob = std::sqrt(var_sum / (static_cast<double>(n) - 1.0) /
                                   static_cast<double>(n));
  REQUIRE((mean - haar_twirl(xr, 2)).norm() <= 3.0 * se_frob);
}

TEST_CASE("ensemble twirl", "[designs]") {
  const ComplexMatrix x = random_complex(4, 4, 21);
  const UnitaryEnsemble id = singleton_ensemble(ComplexMatrix::Identity(2, 2));
  REQUIRE(max_abs(ensemble_twirl(id, x) - x) < 1e-14);

  const UnitaryEnsemble haar_mc = haar_ensemble(2, 50, 3);
  const ComplexMatrix f = swap_operator(2);
  REQUIRE(max_abs(ensemble_twirl(haar_mc, f) - f) < 1e-10);

  // trace preservation
  REQUIRE(std::abs(ensemble_twirl(haar_mc, x).trace() - x.trace()) < 1e-10);

  // blocked reduction is thread-count independent
  const UnitaryEnsemble big = haar_ensemble(2, 300, 9);
  const ComplexMatrix t1 = ensemble_twirl(big, x, 1);
  const ComplexMatrix t4 = ensemble_twirl(big, x, 4);
  REQUIRE(max_abs(t1 - t4) == 0.0);
}

TEST_CASE("clifford groups are exact 2-designs", "[designs][clifford]") {
  const UnitaryEnsemble c1 = clifford_group(1);
  REQUIRE(c1.size() == 24);
  REQUIRE_NOTHROW(c1.validate());

  const ComplexMatrix x = random_complex(4, 4, 31);
  REQUIRE(max_abs(ensemble_twirl(c1, x) - haar_twirl(x, 2)) < 1e-10);
  REQUIRE(is_exact_2design(c1, 1e-9));

  REQUIRE_THROWS_AS(clifford_group(3), InvariantError);
}

TEST_CASE("moment superoperator", "[designs]") {
  // haar at d=2 has rank 2
  const ComplexMatrix sh = haar_moment_superoperator(2);
  Eigen::BDCSVD<ComplexMatrix> svd(sh);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > 1e-10) ++rank;
  REQUIRE(rank == 2);

  // haar superoperator reproduces the closed-form twirl through vec
  const ComplexMatrix x = random_complex(4, 4, 41);
  const ComplexVector tw_vec = sh * vec(x);
  REQUIRE(max_abs(unvec(tw_vec, 4, 4) - haar_twirl(x, 2)) < 1e-12);

  // singleton identity: identity superoperator
  const UnitaryEnsemble id = singleton_ensemble(ComplexMatrix::Identity(2, 2));
  REQUIRE(max_abs(moment_superoperator(id) - ComplexMatrix::Identity(16, 16)) <
          1e-14);

  // Clifford(1) equals haar entrywise
  const UnitaryEnsemble c1 = clifford_group(1);
  REQUIRE(max_abs(moment_superoperator(c1) - sh) < 1e-10);

  REQUIRE_THROWS_AS(haar_moment_superoperator(5), InvariantError);
}

TEST_CASE("delta bounds", "[designs]") {
  const UnitaryEnsemble c1 = clifford_group(1);
  const DeltaEstimate exact = delta_bounds(c1);
  REQUIRE(exact.lower >= 0.0);
  REQUIRE(exact.upper <= 1e-9);
  REQUIRE(std::abs(exact.lower - exact.upper / 4.0) < 1e-15);

  const UnitaryEnsemble id = singleton_ensemble(ComplexMatrix::Identity(2, 2));
  const DeltaEstimate far = delta_bounds(id);
  REQUIRE(far.lower > 0.5);
  REQUIRE(far.upper >= far.lower);

  // statistical: more Haar samples land closer to the Haar twirl
  const DeltaEstimate few = delta_bounds(haar_ensemble(2, 50, 5));
  const DeltaEstimate many = delta_bounds(haar_ensemble(2, 2000, 5));
  REQUIRE(many.upper < few.upper);
}

TEST_CASE("infinity norm vs diamond bound", "[designs]") {
  const UnitaryEnsemble ens = haar_ensemble(2, 100, 17);
  const DeltaEstimate est = delta_bounds(ens);
  REQUIRE(est.lower <= est.upper);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    // normalized test operator on H_d (x) H_d with trace norm <= 1
    ComplexMatrix x = random_complex(4, 4, 6000 + seed);
    x /= trace_norm(x);
    const ComplexMatrix diff = ensemble_twirl(ens, x) - haar_twirl(x, 2);
    REQUIRE(op_norm(diff) <= 4.0 * est.upper + 1e-9);
  }
}

TEST_CASE("random circuit ensembles", "[designs]") {
  const UnitaryEnsemble a = random_circuit_ensemble(2, 1, 10, 3);
  const UnitaryEnsemble b = random_circuit_ensemble(2, 1, 10, 3);
  REQUIRE(a.size() == 10);
  for (std::size_t i = 0; i < a.size(); ++i)
    REQUIRE(max_abs(a.unitaries[i] - b.unitaries[i]) == 0.0);
  REQUIRE_NOTHROW(a.validate());

  // depth 1 at n=2 is a single Haar 2-qubit gate per sample
  const UnitaryEnsemble single = random_circuit_ensemble(2, 1, 3, 9);
  for (const auto &u : single.unitaries)
    REQUIRE(max_abs(u.adjoint() * u - ComplexMatrix::Identity(4, 4)) < 1e-12);

  REQUIRE_THROWS_AS(random_circuit_ensemble(1, 1, 3, 9), InvariantError);
  REQUIRE_THROWS_AS(random_circuit_ensemble(2, 0, 3, 9), InvariantError);

  // statistical delta trend over sample count (depth at n=2 is distribution
  // invariant, so the meaningful knob is the number of samples)
  const DeltaEstimate few = delta_bounds(random_circuit_ensemble(2, 5, 40, 11));
  const DeltaEstimate many =
      delta_bounds(random_circuit_ensemble(2, 5, 1500, 11));
  REQUIRE(many.upper < few.upper);
}

TEST_CASE("exactness consistency", "[designs]") {
  const UnitaryEnsemble c1 = clifford_group(1);
  REQUIRE(is_exact_2design(c1, 1e-9));
  const DeltaEstimate est = delta_bounds(c1);
  REQUIRE(est.upper <= 4.0 * 1e-9 + 1e-9);

  const UnitaryEnsemble id = singleton_ensemble(ComplexMatrix::Identity(2, 2));
  REQUIRE_FALSE(is_exact_2design(id, 1e-9));

  // Haar Monte-Carlo passes a loose statistical tolerance
  const UnitaryEnsemble mc = haar_ensemble(2, 100000, 23);
  REQUIRE(is_exact_2design(mc, 0.05));
}

TEST_CASE("ensemble spec materialization", "[designs]") {
  EnsembleSpec spec;
  spec.kind = EnsembleSpec::Kind::Clifford;
  spec.n_qubits = 1;
  REQUIRE(materialize(spec).size() == 24);

  spec.kind = EnsembleSpec::Kind::HaarSamples;
  spec.d = 2;
  spec.samples = 7;
  spec.seed = 5;
  REQUIRE(materialize(spec).size() == 7);

  spec.kind = EnsembleSpec::Kind::Explicit;
  spec.elements.emplace_back(1.0, ComplexMatrix::Identity(2, 2));
  REQUIRE(materialize(spec).size() == 1);
}
