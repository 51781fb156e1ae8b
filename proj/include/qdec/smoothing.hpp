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

#include "qdec/entropies.hpp"

namespace qdec {

struct SmoothOptions {
  std::uint64_t seed = 0;
  int directions = 48;        // coarse ball directions
  int random_scan = 700;      // random coordinate-space probes before polishing
  int polish_starts = 3;      // Nelder-Mead starts from the best coarse points
  int polish_evals = 1800;    // NM budget per start
  int max_tangent_dims = 0;   // 0: full tangent space when small, else capped
  int inner_evals = 140;      // sigma budget per candidate during h_max search
};

// Witness-certified smoothing result: `value_bits` is the quantity re-evaluated
// at `witness`, which lies in the purified-distance eps-ball of the input.
struct SmoothingResult {
  double value_bits = 0.0;
  DensityOperator witness;
  ComplexMatrix witness_sigma; // optimizing sigma_B (h_max) / normalized X (h_min)
  int iterations = 0;          // candidate evaluations performed
  double residual = 0.0;       // inner certificate residual (solver gap etc.)
};

// sup over the eps-ball (in S_<=) of H_min(A|B); certified lower bound.
SmoothingResult smooth_h_min(const DensityOperator &rho,
                             const std::vector<std::string> &a_labels,
                             double eps, const SmoothOptions &opts = {});

// inf over the eps-ball of H_max(A|B); certified upper bound.
SmoothingResult smooth_h_max(const DensityOperator &rho,
                             const std::vector<std::string> &a_labels,
                             double eps, const SmoothOptions &opts = {});

} // namespace qdec
