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

#include "qdec/smoothing.hpp"
#include "qdec/states.hpp"

namespace qdec {

struct LambdaPair {
  double lambda = 0.0;
  double lambda_prime = 0.0;
};

// Inverts eps = 2 sqrt(5 lambda') + 2 sqrt(lambda) with
// lambda' = lambda + sqrt(4 sqrt(lambda) - 4 lambda), bisecting on the
// grid-verified increasing branch of lambda in (0, 1].
LambdaPair lambda_from_eps(double eps);

double eps_from_lambda(double lambda);
double lambda_prime_of(double lambda);

// Achievable range bound: eps_max = eps(lambda = 1).
double merging_eps_max();

struct RateReport {
  double e_lower = 0.0; // ebits
  double q_upper = 0.0; // qubits
  double lambda = 0.0;
  double lambda_prime = 0.0;
  double h_min_eps = 0.0; // certified bits
  double h0_eps_bits = 0.0;
  double delta = 0.0;
  Eigen::Index d_a1 = 1;
  double eps = 0.0;
};

// One-shot coherent-state-merging achievability rates on a tripartite pure
// state with labels {A,B,R}. d_a1 <= 0 selects the default from a delta = 0
// pre-pass (2^ceil of the entanglement-gain estimate, clamped to >= 1).
RateReport merging_rates(const PureState &psi, double eps, double delta,
                         Eigen::Index d_a1 = 0, const SmoothOptions &opts = {});

struct AsymptoticRates {
  double q_inf = 0.0; // (1/2) I(A:R)
  double e_inf = 0.0; // (1/2) I(A:B)
};

AsymptoticRates asymptotic_rates(const PureState &psi);

struct IidPoint {
  int n = 1;
  double e_rate = 0.0; // per copy
  double q_rate = 0.0;
  double e_gap = 0.0; // vs asymptotic
  double q_gap = 0.0;
};

// One-shot rates on psi^(x)n divided by n, n = 1..n_max (d_A^n <= 64 guard).
std::vector<IidPoint> iid_trend(const PureState &psi, double eps, int n_max,
                                double delta = 0.0, const SmoothOptions &opts = {});

// psi^(x)n with like subsystems grouped: layout {A, B, R} with dims d^n.
PureState tensor_power_grouped(const PureState &psi, int n);

} // namespace qdec
