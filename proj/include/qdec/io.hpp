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

#include <string>
#include <variant>

#include <nlohmann/json_fwd.hpp>

#include "qdec/decoupling.hpp"
#include "qdec/designs.hpp"
#include "qdec/merging.hpp"
#include "qdec/states.hpp"

namespace qdec {

inline constexpr int kSchemaVersion = 1;

using StateFile = std::variant<DensityOperator, PureState>;

// {"schema_version", "kind": "density"|"pure", "labels", "dims", "re", "im"}
StateFile read_state_file(const std::string &path);
StateFile parse_state_json(const nlohmann::json &j);
nlohmann::json state_to_json(const DensityOperator &rho);
nlohmann::json state_to_json(const PureState &psi);
void write_state_file(const std::string &path, const StateFile &state);

// {"kind": "clifford"|"random_circuit"|"haar_samples"|"explicit", ...}
EnsembleSpec read_ensemble_spec(const std::string &path);
EnsembleSpec parse_ensemble_json(const nlohmann::json &j);
nlohmann::json ensemble_to_json(const UnitaryEnsemble &ens);

nlohmann::json report_to_json(const DecouplingReport &report);
nlohmann::json report_to_json(const RateReport &report);
nlohmann::json delta_to_json(const DeltaEstimate &est);

// Serialized with nlohmann's shortest-round-trip doubles: parse(dump(x)) == x.
std::string dump_report(const nlohmann::json &j);
void write_text_file(const std::string &path, const std::string &content);

} // namespace qdec
