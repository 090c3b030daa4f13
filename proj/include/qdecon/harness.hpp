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

#ifndef QDECON_HARNESS_HPP
#define QDECON_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qdecon/protocol.hpp"

namespace qdecon {

enum class OutputFormat { kCsv, kJson };

/// Batch configuration for seeded Monte Carlo sweeps over (rho, n, alpha).
/// Parsed from a flat key = value text file; keys match the field names.
struct SweepConfig {
  /// ghz | max-entangled-AR | product | random | file:PATH
  std::string state = "random";
  std::int64_t rank = 8;           // rank for the random builtin
  std::uint64_t state_seed = 1;    // seed for the random builtin
  std::vector<int> n = {1};
  std::vector<double> alpha = {2.0};
  double delta = 0.1;
  std::string size_mode = "auto";  // auto | explicit
  std::optional<int> log2_f;
  std::optional<int> log2_m;
  int num_u_candidates = 8;
  int samples = 1;
  std::uint64_t seed = 0;          // master seed
  std::string out;                 // output path; empty = stdout
  OutputFormat format = OutputFormat::kCsv;
  /// Wall-clock timings are off by default so repeated runs of one config
  /// emit byte-identical files; enable for profiling only.
  bool timings = false;
  int threads = 1;
};

SweepConfig parse_sweep_config(std::istream& in);

/// ghz and max-entangled-AR and product anchor the hand-derivable targets
/// (1, 2, and 0 bits of conditional mutual information).
DensityOperator builtin_state(const std::string& name, std::int64_t rank,
                              std::uint64_t seed);

/// Resolves a SweepConfig state source (builtin name or file:PATH).
DensityOperator resolve_state(const SweepConfig& config);

/// One grid-point sample, flattened for serialization. On a per-record
/// failure `error` is set and the numeric fields carry the nan sentinel.
struct RunRecord {
  int run_id = 0;
  std::uint64_t seed = 0;
  int n = 0;
  std::int64_t dim_a = 0, dim_b = 0, dim_r = 0, dim_e = 0;
  double alpha = 0.0;
  double delta = 0.0;
  double log2_f = 0.0;
  double log2_m = 0.0;
  double eps_emp = 0.0;
  double eps_bound = 0.0;
  double theta_emp = 0.0;
  double theta_bound = 0.0;
  double erasure_err = 0.0;
  double marginal_err = 0.0;
  double decon_err = 0.0;
  double chain_bound_emp = 0.0;
  double chain_bound_theory = 0.0;
  double rate = 0.0;
  double rate_formula = 0.0;
  double cmi_target = 0.0;
  bool vacuous = false;
  double duration_ms = 0.0;
  std::string error;
};

/// Runs the grid (n x alpha x samples) in deterministic order. Per-sample
/// seeds derive from (master seed, grid indices, sample index), so any
/// record reproduces in isolation; results are identical whether samples
/// run serially or across threads.
std::vector<RunRecord> run_sweep(const SweepConfig& config);

/// Fixed column schema (documented in the README, with a trailing free-text
/// error column). duration_ms is zeroed unless timings are enabled.
void write_csv(std::ostream& out, const std::vector<RunRecord>& records,
               bool timings);
void write_json(std::ostream& out, const std::vector<RunRecord>& records,
                bool timings);

std::string records_to_string(const std::vector<RunRecord>& records,
                              OutputFormat format, bool timings);

extern const char* const kCsvHeader;

}  // namespace qdecon

#endif  // QDECON_HARNESS_HPP
