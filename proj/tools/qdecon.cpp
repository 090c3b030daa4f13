// Copyright 2026 The qdecon Authors
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

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdecon/acceptance.hpp"
#include "qdecon/bounds.hpp"
#include "qdecon/entropy.hpp"
#include "qdecon/harness.hpp"
#include "qdecon/protocol.hpp"

namespace {

using namespace qdecon;

std::vector<std::string> split_labels(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(csv);
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

DensityOperator state_from_flags(const std::string& state, std::int64_t rank,
                                 std::uint64_t seed) {
  SweepConfig config;
  config.state = state;
  config.rank = rank;
  config.state_seed = seed;
  return resolve_state(config);
}

int cmd_entropy(const std::string& state, std::int64_t rank,
                std::uint64_t state_seed, const std::string& of,
                const std::string& given, double alpha) {
  const DensityOperator rho = state_from_flags(state, rank, state_seed);
  EntropyParams params;
  params.alpha = alpha;
  const double value =
      renyi_conditional(rho, split_labels(of), split_labels(given), params);
  std::cout.precision(12);
  std::cout << value << "\n";
  return 0;
}

int cmd_bounds(const std::string& state, std::int64_t rank,
               std::uint64_t state_seed, int n, double alpha, double delta,
               int log2_f_flag, int log2_m_flag, const std::string& base,
               const std::string& format) {
  const DensityOperator rho = state_from_flags(state, rank, state_seed);
  const auto& factors = rho.layout().factors();

  EntropyParams pt;
  pt.alpha = dual_alpha(alpha);
  EntropyParams pa;
  pa.alpha = alpha;
  const double h_at =
      renyi_conditional(rho, {factors[0].label}, {factors[1].label}, pt);
  const double h_a = renyi_conditional(
      rho, {factors[0].label}, {factors[1].label, factors[2].label}, pa);

  EigResult eig = eig_hermitian(rho.op());
  const double cutoff = kSupportCutoff * eig.eigenvalues.maxCoeff();
  std::int64_t dim_e = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > cutoff) ++dim_e;
  }

  SizeChoice sizes;
  if (log2_f_flag >= 0 && log2_m_flag >= 0) {
    sizes.log2_f = log2_f_flag;
    sizes.log2_m = log2_m_flag;
  } else {
    sizes = choose_sizes(n, delta, factors[0].dim, factors[1].dim,
                         factors[2].dim, dim_e, h_at, h_a);
  }

  const ExpBase exp_base =
      base == "e" ? ExpBase::kNatural : ExpBase::kTwo;
  const BoundReport report = make_bound_report(
      alpha, delta, n, factors[0].dim, factors[1].dim, factors[2].dim, dim_e,
      sizes.log2_f, sizes.log2_m, h_at, h_a, asymptotic_rate(rho), exp_base);

  nlohmann::ordered_json obj;
  obj["alpha"] = report.alpha;
  obj["alpha_tilde"] = report.alpha_tilde;
  obj["n"] = report.n;
  obj["dimA"] = report.dim_a;
  obj["dimB"] = report.dim_b;
  obj["dimR"] = report.dim_r;
  obj["dimE"] = report.dim_e;
  obj["log2_F"] = report.log2_f;
  obj["log2_M"] = report.log2_m;
  obj["H_alphatilde_A_given_B"] = report.h_alphatilde_a_given_b;
  obj["H_alpha_A_given_BR"] = report.h_alpha_a_given_br;
  obj["eps_bound"] =
      std::isfinite(report.eps_bound) ? nlohmann::ordered_json(report.eps_bound)
                                      : nlohmann::ordered_json("inf");
  obj["theta_bound"] = std::isfinite(report.theta_bound)
                           ? nlohmann::ordered_json(report.theta_bound)
                           : nlohmann::ordered_json("inf");
  obj["chain_bound_erasure"] = report.chain_bound_erasure;
  obj["rate"] = report.rate;
  obj["rate_formula"] = report.rate_formula;
  obj["cmi_target"] = report.cmi_target;
  obj["vacuous"] = report.vacuous;
  obj["purification_note"] = report.purification_note;

  if (format == "json") {
    std::cout << obj.dump(2) << "\n";
  } else {
    for (const auto& [key, value] : obj.items()) {
      std::cout << key << " = " << value.dump() << "\n";
    }
  }
  return 0;
}

int cmd_run(const std::string& config_path, std::int64_t seed_override,
            const std::string& out_override, const std::string& format_override) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot open config '" << config_path << "'\n";
    return 1;
  }
  SweepConfig config = parse_sweep_config(in);
  if (seed_override >= 0) config.seed = std::uint64_t(seed_override);
  if (!out_override.empty()) config.out = out_override;
  if (!format_override.empty()) {
    config.format = format_override == "json" ? OutputFormat::kJson
                                              : OutputFormat::kCsv;
  }

  const auto records = run_sweep(config);
  const std::string payload =
      records_to_string(records, config.format, config.timings);
  if (config.out.empty()) {
    std::cout << payload;
  } else {
    std::ofstream out(config.out, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write '" << config.out << "'\n";
      return 1;
    }
    out << payload;
  }
  int failures = 0;
  for (const auto& r : records) {
    if (!r.error.empty()) ++failures;
  }
  if (failures > 0) {
    std::cerr << failures << " of " << records.size()
              << " records carry per-record errors\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conditional erasure / deconstruction protocols at desk scale"};
  app.require_subcommand(1);

  // entropy
  std::string state = "random";
  std::int64_t rank = 8;
  std::uint64_t state_seed = 1;
  std::string of = "A";
  std::string given;
  double alpha = 1.0;
  auto* entropy_cmd =
      app.add_subcommand("entropy", "conditional Renyi entropy of a state");
  entropy_cmd->add_option("--state", state,
                          "ghz | max-entangled-AR | product | random | "
                          "file:PATH");
  entropy_cmd->add_option("--rank", rank, "rank of the random builtin");
  entropy_cmd->add_option("--state-seed", state_seed,
                          "seed of the random builtin");
  entropy_cmd->add_option("--of", of, "target labels, comma separated");
  entropy_cmd->add_option("--given", given,
                          "conditioning labels, comma separated");
  entropy_cmd->add_option("--alpha", alpha, "Renyi parameter (1 = von Neumann)");

  // bounds
  int n = 1;
  double delta = 0.1;
  int log2_f_flag = -1;
  int log2_m_flag = -1;
  std::string base = "2";
  std::string format = "text";
  auto* bounds_cmd =
      app.add_subcommand("bounds", "closed-form bound report for a state");
  bounds_cmd->add_option("--state", state, "state source");
  bounds_cmd->add_option("--rank", rank, "rank of the random builtin");
  bounds_cmd->add_option("--state-seed", state_seed,
                         "seed of the random builtin");
  bounds_cmd->add_option("--n", n, "number of copies");
  bounds_cmd->add_option("--alpha", alpha, "Renyi parameter in (1, 2]");
  bounds_cmd->add_option("--delta", delta, "rate slack in bits per copy");
  bounds_cmd->add_option("--log2-f", log2_f_flag,
                         "explicit log2 |F| (with --log2-m)");
  bounds_cmd->add_option("--log2-m", log2_m_flag, "explicit log2 M");
  bounds_cmd->add_option("--base", base, "exponential base: 2 (default) or e");
  bounds_cmd->add_option("--format", format, "text or json");

  // run
  std::string config_path;
  std::int64_t seed_override = -1;
  std::string out_override;
  std::string format_override;
  auto* run_cmd = app.add_subcommand("run", "execute a sweep config");
  run_cmd->add_option("--config", config_path, "sweep config file")->required();
  run_cmd->add_option("--seed", seed_override, "override the master seed");
  run_cmd->add_option("--out", out_override, "override the output path");
  run_cmd->add_option("--format", format_override, "csv or json");

  // accept
  auto* accept_cmd =
      app.add_subcommand("accept", "run the acceptance suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (entropy_cmd->parsed()) {
      return cmd_entropy(state, rank, state_seed, of, given, alpha);
    }
    if (bounds_cmd->parsed()) {
      if (bounds_cmd->count("--alpha") == 0) alpha = 2.0;
      return cmd_bounds(state, rank, state_seed, n, alpha, delta, log2_f_flag,
                        log2_m_flag, base, format);
    }
    if (run_cmd->parsed()) {
      return cmd_run(config_path, seed_override, out_override, format_override);
    }
    if (accept_cmd->parsed()) {
      const AcceptanceReport report = verify_acceptance(std::cout);
      return report.all_pass ? 0 : 2;
    }
  } catch (const qdecon::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
