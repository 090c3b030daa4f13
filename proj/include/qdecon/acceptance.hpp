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

#ifndef QDECON_ACCEPTANCE_HPP
#define QDECON_ACCEPTANCE_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace qdecon {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured value vs threshold
  double seconds = 0.0;
};

struct AcceptanceOptions {
  /// Replaces the alignment-bound function in the chain-inequality checks;
  /// used by negative-control tests to confirm a corrupted bound fails.
  std::function<double(double)> xi;

  /// Sample counts. The defaults are the accepted counts; tests shrink them
  /// for cheap smoke and negative-control runs.
  int duality_states = 200;
  int alpha_limit_states = 20;
  int uhlmann_runs = 50;
  int chain_runs_n1 = 20;
  int chain_runs_n2 = 20;
  int chain_runs_n3 = 10;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  double total_seconds = 0.0;
  bool all_pass = true;
};

/// Runs every acceptance criterion, printing one pass/fail line per
/// criterion plus the total runtime to `log`.
AcceptanceReport verify_acceptance(std::ostream& log,
                                   const AcceptanceOptions& options = {});

}  // namespace qdecon

#endif  // QDECON_ACCEPTANCE_HPP
