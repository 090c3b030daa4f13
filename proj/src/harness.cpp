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

#include "qdecon/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qdecon/errors.hpp"
#include "qdecon/random.hpp"

namespace qdecon {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse number '" +
                      value + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': cannot parse integer '" +
                      value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw ConfigError("config key '" + key + "': expected on/off, got '" +
                    value + "'");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

SweepConfig parse_sweep_config(std::istream& in) {
  SweepConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "state") {
      config.state = value;
    } else if (key == "rank") {
      config.rank = parse_int(key, value);
    } else if (key == "state_seed") {
      config.state_seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "n") {
      config.n.clear();
      for (const auto& item : split_list(value)) {
        config.n.push_back(static_cast<int>(parse_int(key, item)));
      }
    } else if (key == "alpha") {
      config.alpha.clear();
      for (const auto& item : split_list(value)) {
        config.alpha.push_back(parse_double(key, item));
      }
    } else if (key == "delta") {
      config.delta = parse_double(key, value);
    } else if (key == "size_mode") {
      if (value != "auto" && value != "explicit") {
        throw ConfigError("size_mode must be auto or explicit");
      }
      config.size_mode = value;
    } else if (key == "log2_f") {
      config.log2_f = static_cast<int>(parse_int(key, value));
    } else if (key == "log2_m") {
      config.log2_m = static_cast<int>(parse_int(key, value));
    } else if (key == "num_u_candidates") {
      config.num_u_candidates = static_cast<int>(parse_int(key, value));
    } else if (key == "samples") {
      config.samples = static_cast<int>(parse_int(key, value));
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parse_int(key, value));
    } else if (key == "out") {
      config.out = value;
    } else if (key == "format") {
      if (value == "csv") {
        config.format = OutputFormat::kCsv;
      } else if (value == "json") {
        config.format = OutputFormat::kJson;
      } else {
        throw ConfigError("format must be csv or json");
      }
    } else if (key == "timings") {
      config.timings = parse_bool(key, value);
    } else if (key == "threads") {
      config.threads = static_cast<int>(parse_int(key, value));
    } else {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    }
  }
  if (config.n.empty() || config.alpha.empty() || config.samples < 1) {
    throw ConfigError("config needs non-empty n and alpha lists and "
                      "samples >= 1");
  }
  if (config.size_mode == "explicit" &&
      (!config.log2_f.has_value() || !config.log2_m.has_value())) {
    throw ConfigError("explicit size_mode requires log2_f and log2_m");
  }
  return config;
}

DensityOperator builtin_state(const std::string& name, std::int64_t rank,
                              std::uint64_t seed) {
  const SubsystemLayout abr({{"A", 2}, {"B", 2}, {"R", 2}});
  if (name == "ghz") {
    Vector amps = Vector::Zero(8);
    amps(0) = 1.0 / std::sqrt(2.0);
    amps(7) = 1.0 / std::sqrt(2.0);
    return PureState(abr, std::move(amps)).to_density();
  }
  if (name == "max-entangled-AR") {
    // Phi^{AR} (x) pi^B, assembled on [A, R, B] and permuted to [A, B, R].
    Vector phi = Vector::Zero(4);
    phi(0) = 1.0 / std::sqrt(2.0);
    phi(3) = 1.0 / std::sqrt(2.0);
    const Operator phi_ar(SubsystemLayout({{"A", 2}, {"R", 2}}),
                          phi * phi.adjoint());
    const Operator pi_b(SubsystemLayout::single("B", 2),
                        Matrix::Identity(2, 2) / 2.0);
    return DensityOperator(
        permute_subsystems(kron(phi_ar, pi_b), {"A", "B", "R"}));
  }
  if (name == "product") {
    // Pure |0> on A times a full-rank classically correlated rho^{BR}.
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    Eigen::Vector4d diag(0.4, 0.3, 0.2, 0.1);
    const Operator rho_a(SubsystemLayout::single("A", 2), a);
    const Operator rho_br(SubsystemLayout({{"B", 2}, {"R", 2}}),
                          diag.cast<Complex>().asDiagonal());
    return DensityOperator(kron(rho_a, rho_br));
  }
  if (name == "random") {
    return random_density(abr, rank, seed);
  }
  throw ConfigError("unknown builtin state '" + name +
                    "' (expected ghz, max-entangled-AR, product, random)");
}

DensityOperator resolve_state(const SweepConfig& config) {
  if (config.state.rfind("file:", 0) == 0) {
    const std::string path = config.state.substr(5);
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open state file '" + path + "'");
    DensityOperator rho = load_density(in);
    if (rho.layout().size() != 3) {
      throw ConfigError("state file must hold a tripartite [A, B, R] state");
    }
    return rho;
  }
  return builtin_state(config.state, config.rank, config.state_seed);
}

std::vector<RunRecord> run_sweep(const SweepConfig& config) {
  struct Item {
    int run_id;
    int n;
    double alpha;
    std::uint64_t seed;
  };
  std::vector<Item> items;
  int run_id = 0;
  for (std::size_t i_n = 0; i_n < config.n.size(); ++i_n) {
    for (std::size_t i_alpha = 0; i_alpha < config.alpha.size(); ++i_alpha) {
      for (int i_sample = 0; i_sample < config.samples; ++i_sample) {
        items.push_back(Item{run_id++, config.n[i_n], config.alpha[i_alpha],
                             derive_seed(config.seed,
                                         {i_n, i_alpha,
                                          std::uint64_t(i_sample)})});
      }
    }
  }

  auto nan_out = [](RunRecord& record, const std::string& message) {
    record.error = message;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    record.log2_f = record.log2_m = nan;
    record.eps_emp = record.eps_bound = nan;
    record.theta_emp = record.theta_bound = nan;
    record.erasure_err = record.marginal_err = record.decon_err = nan;
    record.chain_bound_emp = record.chain_bound_theory = nan;
    record.rate = record.rate_formula = record.cmi_target = nan;
  };

  // An unreadable state source still yields one error entry per grid point
  // so downstream tooling sees the full grid.
  DensityOperator rho;
  try {
    rho = resolve_state(config);
  } catch (const Error& e) {
    std::vector<RunRecord> records(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
      records[i].run_id = items[i].run_id;
      records[i].seed = items[i].seed;
      records[i].n = items[i].n;
      records[i].alpha = items[i].alpha;
      records[i].delta = config.delta;
      nan_out(records[i], e.what());
    }
    return records;
  }
  const auto& factors = rho.layout().factors();

  auto execute = [&](const Item& item) {
    RunRecord record;
    record.run_id = item.run_id;
    record.seed = item.seed;
    record.n = item.n;
    record.alpha = item.alpha;
    record.delta = config.delta;
    record.dim_a = factors[0].dim;
    record.dim_b = factors[1].dim;
    record.dim_r = factors[2].dim;
    try {
      ProtocolConfig pc;
      pc.rho = rho;
      pc.n = item.n;
      pc.alpha = item.alpha;
      pc.delta = config.delta;
      if (config.size_mode == "explicit") {
        pc.log2_f = config.log2_f;
        pc.log2_m = config.log2_m;
      }
      pc.num_u_candidates = config.num_u_candidates;
      pc.seed = item.seed;
      const ProtocolRun run = run_protocol(pc);

      record.dim_e = run.bounds.dim_e;
      record.log2_f = run.sizes.log2_f;
      record.log2_m = run.sizes.log2_m;
      record.eps_emp = run.eps_emp;
      record.eps_bound = run.bounds.eps_bound;
      record.theta_emp = run.theta_emp;
      record.theta_bound = run.bounds.theta_bound;
      record.erasure_err = run.erasure_err;
      record.marginal_err = run.marginal_err;
      record.decon_err = run.decon_err;
      record.chain_bound_emp = run.chain_bound_emp;
      record.chain_bound_theory = run.bounds.chain_bound_erasure;
      record.rate = run.bounds.rate;
      record.rate_formula = run.bounds.rate_formula;
      record.cmi_target = run.bounds.cmi_target;
      record.vacuous = run.bounds.vacuous;
      record.duration_ms = run.duration_ms;
    } catch (const Error& e) {
      nan_out(record, e.what());
    }
    return record;
  };

  std::vector<RunRecord> records(items.size());
  const int threads = std::max(1, config.threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      records[i] = execute(items[i]);
    }
  } else {
    std::vector<std::future<void>> futures;
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < threads; ++t) {
      futures.push_back(std::async(std::launch::async, [&]() {
        for (std::size_t i = next.fetch_add(1); i < items.size();
             i = next.fetch_add(1)) {
          records[i] = execute(items[i]);
        }
      }));
    }
    for (auto& f : futures) f.get();
  }
  return records;
}

const char* const kCsvHeader =
    "run_id,seed,n,dimA,dimB,dimR,dimE,alpha,delta,log2_F,log2_M,eps_emp,"
    "eps_bound,theta_emp,theta_bound,erasure_err,marginal_err,decon_err,"
    "chain_bound_emp,chain_bound_theory,rate,rate_formula,cmi_target,"
    "vacuous_flag,duration_ms,error";

void write_csv(std::ostream& out, const std::vector<RunRecord>& records,
               bool timings) {
  out << kCsvHeader << "\n";
  for (const auto& r : records) {
    out << r.run_id << ',' << r.seed << ',' << r.n << ',' << r.dim_a << ','
        << r.dim_b << ',' << r.dim_r << ',' << r.dim_e << ','
        << format_double(r.alpha) << ',' << format_double(r.delta) << ','
        << format_double(r.log2_f) << ',' << format_double(r.log2_m) << ','
        << format_double(r.eps_emp) << ',' << format_double(r.eps_bound) << ','
        << format_double(r.theta_emp) << ',' << format_double(r.theta_bound)
        << ',' << format_double(r.erasure_err) << ','
        << format_double(r.marginal_err) << ',' << format_double(r.decon_err)
        << ',' << format_double(r.chain_bound_emp) << ','
        << format_double(r.chain_bound_theory) << ',' << format_double(r.rate)
        << ',' << format_double(r.rate_formula) << ','
        << format_double(r.cmi_target) << ',' << (r.vacuous ? 1 : 0) << ','
        << format_double(timings ? r.duration_ms : 0.0) << ',' << r.error
        << "\n";
  }
}

void write_json(std::ostream& out, const std::vector<RunRecord>& records,
                bool timings) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json obj;
    obj["run_id"] = r.run_id;
    obj["seed"] = r.seed;
    obj["n"] = r.n;
    obj["dimA"] = r.dim_a;
    obj["dimB"] = r.dim_b;
    obj["dimR"] = r.dim_r;
    obj["dimE"] = r.dim_e;
    obj["alpha"] = r.alpha;
    obj["delta"] = r.delta;
    // NaN/inf serialize to null in JSON; keep them as strings instead so the
    // sentinel survives a round trip.
    auto put = [&obj](const char* key, double v) {
      if (std::isfinite(v)) {
        obj[key] = v;
      } else {
        obj[key] = std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
      }
    };
    put("log2_F", r.log2_f);
    put("log2_M", r.log2_m);
    put("eps_emp", r.eps_emp);
    put("eps_bound", r.eps_bound);
    put("theta_emp", r.theta_emp);
    put("theta_bound", r.theta_bound);
    put("erasure_err", r.erasure_err);
    put("marginal_err", r.marginal_err);
    put("decon_err", r.decon_err);
    put("chain_bound_emp", r.chain_bound_emp);
    put("chain_bound_theory", r.chain_bound_theory);
    put("rate", r.rate);
    put("rate_formula", r.rate_formula);
    put("cmi_target", r.cmi_target);
    obj["vacuous_flag"] = r.vacuous;
    obj["duration_ms"] = timings ? r.duration_ms : 0.0;
    obj["error"] = r.error;
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << "\n";
}

std::string records_to_string(const std::vector<RunRecord>& records,
                              OutputFormat format, bool timings) {
  std::ostringstream out;
  if (format == OutputFormat::kCsv) {
    write_csv(out, records, timings);
  } else {
    write_json(out, records, timings);
  }
  return out.str();
}

}  // namespace qdecon
