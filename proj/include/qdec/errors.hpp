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

#include <stdexcept>
#include <string>

namespace qdec {

// Malformed input files or option strings.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string &msg) : std::runtime_error(msg) {}
};

// Violated preconditions or domain-type invariants (dimension mismatch,
// non-PSD input, label errors, out-of-range parameters).
struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string &msg) : std::runtime_error(msg) {}
};

// Optimizer / solver failed to reach its convergence target.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace qdec
