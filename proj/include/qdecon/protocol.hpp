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

#ifndef QDECON_PROTOCOL_HPP
#define QDECON_PROTOCOL_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qdecon/bounds.hpp"
#include "qdecon/entropy.hpp"
#include "qdecon/states.hpp"
#include "qdecon/unitaries.hpp"

namespace qdecon {

/// One conditional-erasure / deconstruction protocol instance. The input
/// density must be tripartite with factors [A, B, R] in layout order: A is
/// erased, B conditions, R is the untouched reference.
struct ProtocolConfig {
  DensityOperator rho;
  int n = 1;
  double alpha = 2.0;
  double delta = 0.1;
  /// Explicit sizes in bits (|F| = 2^log2_f, M = 2^log2_m); unset = auto.
  std::optional<int> log2_f;
  std::optional<int> log2_m;
  int num_u_candidates = 8;
  std::uint64_t seed = 0;
  /// Minimizer settings for the conditional-entropy evaluations (the alpha
  /// field inside is ignored; alphas come from this config).
  EntropyParams entropy{};
  ExpBase exp_base = ExpBase::kTwo;
};

/// Chosen |F| and M together with the raw formula values and clamp flags.
struct SizeChoice {
  std::int64_t dim_f = 1;
  std::int64_t num_unitaries = 1;
  double log2_f = 0.0;
  double log2_m = 0.0;
  double log2_f_raw = 0.0;  // ceiling of the size formula, before clamping
  double log2_m_raw = 0.0;
  bool clamped_f = false;
  bool clamped_m = false;
};

/// Size formulas evaluated from precomputed entropies:
///   log2_f = ceil(n H_at(A|B) + dimR dimE log2(n+1) + n delta/2),
///            clamped to [0, n log2 dimA];
///   log2_m = log2_f + ceil(-n H_a(A|BR) + dimB dimR log2(n+1) + n delta/2),
///            clamped to [0, 2 log2_f].
SizeChoice choose_sizes(int n, double delta, std::int64_t dim_a,
                        std::int64_t dim_b, std::int64_t dim_r,
                        std::int64_t dim_e, double h_alphatilde_a_given_b,
                        double h_alpha_a_given_br);

/// Convenience overload computing the entropies (and the purification rank
/// dimE) from the config.
SizeChoice choose_sizes(const ProtocolConfig& config);

/// Real-valued (un-ceiled, un-clamped) size formulas; the smooth exponent
/// view used by the bound-decay checks.
void size_formulas_real(int n, double delta, std::int64_t dim_b,
                        std::int64_t dim_r, std::int64_t dim_e,
                        double h_alphatilde_a_given_b,
                        double h_alpha_a_given_br, double* log2_f,
                        double* log2_m);

/// Both erasure-protocol error conditions for a candidate product state:
/// product_distance = || upsilon - tau (x) upsilon^{BR} ||_1 and
/// marginal_distance = || upsilon^{BR} - reference_br ||_1.
struct ErasureReport {
  double product_distance = 0.0;
  double marginal_distance = 0.0;
};

ErasureReport erasure_error(const DensityOperator& upsilon, const Operator& tau,
                            const Operator& reference_br);

/// || upsilon - R(upsilon^{BR}) ||_1 for the explicit product recovery map
/// R(x) = (w^dag . pi_F) (x) x. Upper-bounds the best-recovery error; shares
/// the erasure_error code path so the two agree bit-for-bit.
double deconstruction_error(const DensityOperator& upsilon,
                            const PartialIsometry& iso);

/// Everything measured in one protocol run.
struct ProtocolRun {
  DensityOperator upsilon;  // averaged output state on [A^n, B^n, R^n]
  Operator tau;             // w^dag . pi_F on A^n

  double eps_emp = 0.0;    // decoupling residual of the chosen U
  double theta_emp = 0.0;  // twirling residual of the chosen U
  std::vector<double> eps_candidates;
  std::vector<double> theta_candidates;
  int chosen_candidate = 0;

  double erasure_err = 0.0;   // || upsilon - tau (x) upsilon^{BR} ||_1
  double marginal_err = 0.0;  // || upsilon^{BR} - rho_BR^{(x)n} ||_1
  double decon_err = 0.0;     // recovery-map distance; equals erasure_err
  double product_ref_err = 0.0;  // || upsilon - tau (x) rho_BR^{(x)n} ||_1
  double erasure_err_marginal_tau = 0.0;  // diagnostic: tau = upsilon^{A^n}
  double chain_bound_emp = 0.0;           // Xi(eps_emp) + theta_emp

  double uhlmann_overlap = 0.0;
  double alignment_residual = 0.0;  // || phi_normalized - V_U psi ||_1
  double renormalization = 1.0;     // trace mass kept by the projection

  SizeChoice sizes;
  BoundReport bounds;
  double duration_ms = 0.0;
};

/// Executes the full pipeline: purify, group n copies, sample U candidates,
/// keep the best by max(eps, theta), align with the Uhlmann unitary, build
/// the averaged output state, and measure every error in the chain.
ProtocolRun run_protocol(const ProtocolConfig& config);

}  // namespace qdecon

#endif  // QDECON_PROTOCOL_HPP
