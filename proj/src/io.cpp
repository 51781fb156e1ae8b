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

#include "qdec/io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qdec {

using nlohmann::json;

namespace {

json load_json(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception &e) {
    throw ParseError("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

std::vector<std::string> labels_of(const json &j) {
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    for (const auto &l : j.at("labels")) labels.push_back(l.get<std::string>());
  }
  return labels;
}

std::vector<Eigen::Index> dims_of(const json &j) {
  std::vector<Eigen::Index> dims;
  for (const auto &d : j.at("dims")) dims.push_back(d.get<Eigen::Index>());
  return dims;
}

ComplexMatrix matrix_from_parts(const json &re, const json &im) {
  if (!re.is_array() || re.empty() || !re.front().is_array())
    throw ParseError("state file: 're' must be a 2-D array");
  const Eigen::Index rows = static_cast<Eigen::Index>(re.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(re.front().size());
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto &re_row = re.at(static_cast<std::size_t>(r));
    const auto &im_row = im.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(re_row.size()) != cols ||
        static_cast<Eigen::Index>(im_row.size()) != cols)
      throw ParseError("state file: ragged re/im arrays");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = Complex(re_row.at(static_cast<std::size_t>(c)).get<double>(),
                        im_row.at(static_cast<std::size_t>(c)).get<double>());
  }
  return m;
}

ComplexVector vector_from_parts(const json &re, const json &im) {
  if (!re.is_array() || (re.size() && re.front().is_array()))
    throw ParseError("state file: pure-state 're' must be a 1-D array");
  const Eigen::Index n = static_cast<Eigen::Index>(re.size());
  ComplexVector v(n);
  if (static_cast<Eigen::Index>(im.size()) != n)
    throw ParseError("state file: re/im size mismatch");
  for (Eigen::Index i = 0; i < n; ++i)
    v(i) = Complex(re.at(static_cast<std::size_t>(i)).get<double>(),
                   im.at(static_cast<std::size_t>(i)).get<double>());
  return v;
}

SystemLayout layout_from_json(const json &j, Eigen::Index total) {
  std::vector<Eigen::Index> dims = dims_of(j);
  std::vector<std::string> labels = labels_of(j);
  if (labels.empty()) {
    const std::vector<std::string> defaults{"A", "B", "R", "S", "T"};
    for (std::size_t i = 0; i < dims.size(); ++i)
      labels.push_back(i < defaults.size() ? defaults[i]
                                           : "S" + std::to_string(i));
  }
  try {
    SystemLayout layout(labels, dims);
    if (layout.dim() != total)
      throw ParseError("state file: dims do not match the array shape");
    return layout;
  } catch (const InvariantError &e) {
    throw ParseError(std::string("state file: ") + e.what());
  }
}

json matrix_parts(const ComplexMatrix &m, bool real_part) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(real_part ? m(r, c).real() : m(r, c).imag());
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_parts(const ComplexVector &v, bool real_part) {
  json row = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    row.push_back(real_part ? v(i).real() : v(i).imag());
  return row;
}

} // namespace

StateFile parse_state_json(const json &j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "density") {
      ComplexMatrix m = matrix_from_parts(j.at("re"), j.at("im"));
      SystemLayout layout = layout_from_json(j, m.rows());
      if (m.rows() != m.cols())
        throw ParseError("state file: density matrix must be square");
      try {
        return DensityOperator(std::move(m), std::move(layout));
      } catch (const InvariantError &) {
        throw;
      }
    }
    if (kind == "pure") {
      ComplexVector v = vector_from_parts(j.at("re"), j.at("im"));
      SystemLayout layout = layout_from_json(j, v.size());
      return PureState(std::move(v), std::move(layout));
    }
    throw ParseError("state file: unknown kind '" + kind + "'");
  } catch (const json::exception &e) {
    throw ParseError(std::string("state file: ") + e.what());
  }
}

StateFile read_state_file(const std::string &path) {
  return parse_state_json(load_json(path));
}

json state_to_json(const DensityOperator &rho) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "density";
  j["labels"] = rho.layout().labels;
  j["dims"] = rho.layout().dims;
  j["re"] = matrix_parts(rho.matrix(), true);
  j["im"] = matrix_parts(rho.matrix(), false);
  return j;
}

json state_to_json(const PureState &psi) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "pure";
  j["labels"] = psi.layout().labels;
  j["dims"] = psi.layout().dims;
  j["re"] = vector_parts(psi.amplitudes(), true);
  j["im"] = vector_parts(psi.amplitudes(), false);
  return j;
}

void write_state_file(const std::string &path, const StateFile &state) {
  const json j = std::visit([](const auto &s) { return state_to_json(s); }, state);
  write_text_file(path, dump_report(j));
}

EnsembleSpec parse_ensemble_json(const json &j) {
  EnsembleSpec spec;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "clifford") {
      spec.kind = EnsembleSpec::Kind::Clifford;
      spec.n_qubits = j.at("n_qubits").get<int>();
    } else if (kind == "random_circuit") {
      spec.kind = EnsembleSpec::Kind::RandomCircuit;
      spec.n_qubits = j.at("n_qubits").get<int>();
      spec.depth = j.at("depth").get<int>();
      spec.samples = j.at("samples").get<int>();
      spec.seed = j.value("seed", 0ULL);
    } else if (kind == "haar_samples") {
      spec.kind = EnsembleSpec::Kind::HaarSamples;
      spec.d = j.at("d").get<Eigen::Index>();
      spec.samples = j.at("samples").get<int>();
      spec.seed = j.value("seed", 0ULL);
    } else if (kind == "explicit") {
      spec.kind = EnsembleSpec::Kind::Explicit;
      for (const auto &el : j.at("elements")) {
        const double p = el.at("p").get<double>();
        ComplexMatrix u = matrix_from_parts(el.at("re"), el.at("im"));
        spec.elements.emplace_back(p, std::move(u));
      }
    } else {
      throw ParseError("ensemble spec: unknown kind '" + kind + "'");
    }
  } catch (const json::exception &e) {
    throw ParseError(std::string("ensemble spec: ") + e.what());
  }
  return spec;
}

EnsembleSpec read_ensemble_spec(const std::string &path) {
  return parse_ensemble_json(load_json(path));
}

json ensemble_to_json(const UnitaryEnsemble &ens) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = "explicit";
  j["d"] = ens.dim;
  json elements = json::array();
  for (std::size_t i = 0; i < ens.size(); ++i) {
    json el;
    el["p"] = ens.probs[i];
    el["re"] = matrix_parts(ens.unitaries[i], true);
    el["im"] = matrix_parts(ens.unitaries[i], false);
    elements.push_back(std::move(el));
  }
  j["elements"] = std::move(elements);
  return j;
}

json delta_to_json(const DeltaEstimate &est) {
  json j;
  j["lower"] = est.lower;
  j["upper"] = est.upper;
  return j;
}

json report_to_json(const DecouplingReport &report) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["report"] = "decoupling";
  j["empirical_average"] = report.empirical_average;
  j["bound"] = report.bound;
  j["condition_holds"] = report.condition_holds;
  j["condition_slack_bits"] = report.condition_slack;
  j["per_element"] = {{"min", report.per_element_min},
                      {"max", report.per_element_max},
                      {"mean", report.per_element_mean}};
  j["ensemble_delta"] = delta_to_json(report.ensemble_delta);
  j["eps"] = report.eps;
  j["element_count"] = report.element_count;
  return j;
}

json report_to_json(const RateReport &report) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["report"] = "merging_rates";
  j["e_lower_ebits"] = report.e_lower;
  j["q_upper_qubits"] = report.q_upper;
  j["lambda"] = report.lambda;
  j["lambda_prime"] = report.lambda_prime;
  j["h_min_eps_bits"] = report.h_min_eps;
  j["h0_eps_bits"] = report.h0_eps_bits;
  j["delta"] = report.delta;
  j["d_a1"] = report.d_a1;
  j["eps"] = report.eps;
  return j;
}

std::string dump_report(const json &j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << content;
}

} // namespace qdec
