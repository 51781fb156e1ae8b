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

#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qdec/io.hpp"

namespace {

using nlohmann::json;
using namespace qdec;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitSolver = 4;
constexpr int kExitBoundViolation = 5;

struct CommonOpts {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out;
};

void emit(const json &j, const CommonOpts &common) {
  const std::string text = dump_report(j);
  if (common.out.empty())
    std::cout << text;
  else
    write_text_file(common.out, text);
}

DensityOperator require_density(const StateFile &state) {
  if (std::holds_alternative<DensityOperator>(state))
    return std::get<DensityOperator>(state);
  return std::get<PureState>(state).to_density();
}

PureState require_pure(const StateFile &state) {
  if (!std::holds_alternative<PureState>(state))
    throw InvariantError("this command requires a pure-state file");
  return std::get<PureState>(state);
}

std::vector<std::string> split_labels(const std::string &csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

BipartiteSplit parse_split(const std::string &text) {
  const auto x = text.find('x');
  if (x == std::string::npos)
    throw ParseError("--split expects the form d1xd2, e.g. 2x2");
  BipartiteSplit split;
  try {
    split.d_a1 = std::stoll(text.substr(0, x));
    split.d_a2 = std::stoll(text.substr(x + 1));
  } catch (const std::exception &) {
    throw ParseError("--split expects integer dimensions, e.g. 2x2");
  }
  if (split.d_a1 < 1 || split.d_a2 < 1)
    throw ParseError("--split dimensions must be positive");
  return split;
}

SmoothOptions smooth_opts(const CommonOpts &common) {
  SmoothOptions opts;
  opts.seed = common.seed;
  return opts;
}

int cmd_entropy(const std::string &state_path, const std::string &quantity,
                double alpha, double eps, const std::string &sigma_path,
                const std::string &cond_csv, const CommonOpts &common) {
  const StateFile state = read_state_file(state_path);
  const DensityOperator rho = require_density(state);
  const std::vector<std::string> cond = split_labels(cond_csv);

  json j;
  j["schema_version"] = kSchemaVersion;
  j["report"] = "entropy";
  j["quantity"] = quantity;
  if (quantity == "vn") {
    j["value_bits"] = von_neumann(rho);
    j["provenance"] = "exact spectral evaluation";
  } else if (quantity == "mutual-info") {
    j["value_bits"] = mutual_information(rho, cond);
    j["provenance"] = "exact spectral evaluation";
  } else if (quantity == "renyi") {
    if (sigma_path.empty())
      throw ParseError("quantity=renyi requires --sigma <state-file>");
    const DensityOperator sigma = require_density(read_state_file(sigma_path));
    j["alpha"] = alpha;
    j["value_bits"] = renyi_divergence(rho, sigma, alpha);
    j["provenance"] = "direct formula on supports";
  } else if (quantity == "hmin") {
    const HminResult r = h_min(rho, cond);
    j["value_bits"] = r.value_bits;
    j["solver"] = {{"newton_steps", r.newton_steps}, {"gap", r.gap}};
    j["provenance"] = "certified lower bound (feasible SDP witness)";
  } else if (quantity == "hmax") {
    CondEntropyOptions copts;
    copts.seed = common.seed;
    const CondEntropyResult r = h_max(rho, cond, copts);
    j["value_bits"] = r.value_bits;
    j["solver"] = {{"evaluations", r.evaluations}, {"residual", r.residual}};
    j["provenance"] = "certified lower bound on the sigma supremum";
  } else if (quantity == "smooth-hmin" || quantity == "smooth-hmax") {
    const SmoothingResult r =
        quantity == "smooth-hmin"
            ? smooth_h_min(rho, cond, eps, smooth_opts(common))
            : smooth_h_max(rho, cond, eps, smooth_opts(common));
    j["eps"] = eps;
    j["value_bits"] = r.value_bits;
    j["witness"] = {{"trace_mass", r.witness.trace_mass()},
                    {"evaluations", r.iterations},
                    {"residual", r.residual}};
    j["provenance"] = quantity == "smooth-hmin"
                          ? "certified lower bound (witness in the eps-ball)"
                          : "certified upper bound (witness in the eps-ball)";
  } else if (quantity == "h0") {
    j["eps"] = eps;
    j["value_bits"] = h0_eps(rho, eps);
    j["provenance"] = "eigenbasis truncation (one-sided upper bound)";
  } else {
    throw ParseError("unknown quantity '" + quantity + "'");
  }
  emit(j, common);
  return kExitOk;
}

int cmd_design(const std::string &ensemble_path, const std::string &action,
               double tol, const CommonOpts &common) {
  const EnsembleSpec spec = read_ensemble_spec(ensemble_path);
  const UnitaryEnsemble ens = materialize(spec);
  ens.validate();

  json j;
  j["schema_version"] = kSchemaVersion;
  j["report"] = "design";
  j["action"] = action;
  j["d"] = ens.dim;
  j["element_count"] = ens.size();
  if (action == "gen") {
    emit(ensemble_to_json(ens), common);
    return kExitOk;
  }
  if (action == "delta") {
    j["delta"] = delta_to_json(delta_bounds(ens, common.threads));
  } else if (action == "check") {
    j["tol"] = tol;
    j["exact_2design"] = is_exact_2design(ens, tol, common.threads);
  } else {
    throw ParseError("design action must be gen, delta or check");
  }
  emit(j, common);
  return kExitOk;
}

int cmd_decouple(const std::string &state_path, const std::string &ensemble_path,
                 const std::string &split_text, double eps,
                 const CommonOpts &common) {
  const DensityOperator rho = require_density(read_state_file(state_path));
  const UnitaryEnsemble ens = materialize(read_ensemble_spec(ensemble_path));
  ens.validate();
  const BipartiteSplit split = parse_split(split_text);
  const DecouplingReport report =
      run_experiment(rho, ens, split, eps, common.threads, smooth_opts(common));
  emit(report_to_json(report), common);
  if (report.condition_holds && report.empirical_average > report.bound)
    return kExitBoundViolation;
  return kExitOk;
}

int cmd_rates(const std::string &state_path, double eps, double delta,
              Eigen::Index d_a1, bool asymptotic, int iid_n,
              const CommonOpts &common) {
  const PureState psi = require_pure(read_state_file(state_path));
  json j;
  if (asymptotic) {
    const AsymptoticRates r = asymptotic_rates(psi);
    j["schema_version"] = kSchemaVersion;
    j["report"] = "asymptotic_rates";
    j["q_inf_qubits"] = r.q_inf;
    j["e_inf_ebits"] = r.e_inf;
    emit(j, common);
    return kExitOk;
  }
  if (iid_n > 0) {
    const auto points = iid_trend(psi, eps, iid_n, delta, smooth_opts(common));
    j["schema_version"] = kSchemaVersion;
    j["report"] = "iid_trend";
    j["eps"] = eps;
    j["delta"] = delta;
    json arr = json::array();
    for (const auto &pt : points) {
      arr.push_back({{"n", pt.n},
                     {"e_rate_ebits", pt.e_rate},
                     {"q_rate_qubits", pt.q_rate},
                     {"e_gap", pt.e_gap},
                     {"q_gap", pt.q_gap}});
    }
    j["points"] = std::move(arr);
    emit(j, common);
    return kExitOk;
  }
  const RateReport report =
      merging_rates(psi, eps, delta, d_a1, smooth_opts(common));
  emit(report_to_json(report), common);
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"decoupling, approximate 2-designs and one-shot merging rates"};
  app.require_subcommand(1);
  app.fallthrough(); // global flags may follow the subcommand

  CommonOpts common;
  app.add_option("--seed", common.seed, "optimizer / sampling seed");
  app.add_option("--threads", common.threads,
                 "worker cap (results are thread-count independent)");
  app.add_option("--out", common.out, "write the report here instead of stdout");

  std::string state_path, sigma_path, ensemble_path, split_text = "2x1";
  std::string quantity = "vn", action = "check", cond_csv = "A";
  double alpha = 2.0, eps = 0.1, delta = 0.0, tol = 1e-9;
  Eigen::Index d_a1 = 0;
  bool asymptotic = false;
  int iid_n = 0;

  auto *entropy = app.add_subcommand("entropy", "entropy stack on a state file");
  entropy->fallthrough();
  entropy->add_option("--state", state_path, "state file")->required();
  entropy->add_option("--quantity", quantity,
                      "renyi|hmin|hmax|smooth-hmin|smooth-hmax|h0|vn|mutual-info")
      ->required();
  entropy->add_option("--alpha", alpha, "Renyi order");
  entropy->add_option("--eps", eps, "smoothing parameter");
  entropy->add_option("--sigma", sigma_path, "second state (renyi)");
  entropy->add_option("--cond", cond_csv, "conditioned labels, comma separated");

  auto *design = app.add_subcommand("design", "ensemble construction and delta");
  design->fallthrough();
  design->add_option("--ensemble", ensemble_path, "ensemble spec file")->required();
  design->add_option("action", action, "gen|delta|check")->required();
  design->add_option("--tol", tol, "exactness tolerance for check");

  auto *decouple = app.add_subcommand("decouple", "run a decoupling experiment");
  decouple->fallthrough();
  decouple->add_option("--state", state_path, "state file with labels {A,R}")
      ->required();
  decouple->add_option("--ensemble", ensemble_path, "ensemble spec file")
      ->required();
  decouple->add_option("--split", split_text, "A = A1 A2 split, e.g. 2x2")
      ->required();
  decouple->add_option("--eps", eps, "smoothing parameter")->required();

  auto *rates = app.add_subcommand("rates", "one-shot merging rates");
  rates->fallthrough();
  rates->add_option("--state", state_path, "pure state file with labels {A,B,R}")
      ->required();
  rates->add_option("--eps", eps, "protocol error");
  rates->add_option("--delta", delta, "design approximation delta");
  rates->add_option("--d-a1", d_a1, "|A1| in the rate log term (0: default rule)");
  rates->add_flag("--asymptotic", asymptotic, "print the IID limits instead");
  rates->add_option("--iid-trend", iid_n, "evaluate psi^(x)n rates for n=1..N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (entropy->parsed())
      return cmd_entropy(state_path, quantity, alpha, eps, sigma_path, cond_csv,
                         common);
    if (design->parsed()) return cmd_design(ensemble_path, action, tol, common);
    if (decouple->parsed())
      return cmd_decouple(state_path, ensemble_path, split_text, eps, common);
    if (rates->parsed())
      return cmd_rates(state_path, eps, delta, d_a1, asymptotic, iid_n, common);
  } catch (const ParseError &e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    return kExitParse;
  } catch (const InvariantError &e) {
    std::cerr << "error: invariant: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const SolverError &e) {
    std::cerr << "error: solver: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception &e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}
