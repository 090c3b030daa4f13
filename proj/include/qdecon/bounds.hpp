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

#ifndef QDECON_BOUNDS_HPP
#define QDECON_BOUNDS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qdecon/states.hpp"

namespace qdecon {

/// Converts a marginal trace-norm bound eps into a global pure-state
/// alignment bound: sqrt(eps (2 + eps + 2 sqrt(1 + eps))). Monotone
/// increasing; rejects negative input.
double alignment_bound(double eps);

/// Base used for the exponential in the error-bound formulas. All bit
/// quantities (entropies, log2_f, log2_m) stay base-2; kTwo reads the outer
/// exponential as 2^x so everything shares one unit, kNatural reads it as
/// e^x for sensitivity checks.
enum class ExpBase { kTwo, kNatural };

/// Decoupling error bound:
///   8 * base^{ ((alpha-1)/2alpha) (dimR dimE log2(n+1) - n H_alpha(A|RE)
///               - log2_f) }.
double decoupling_error_bound(double alpha, int n, std::int64_t dim_r,
                              std::int64_t dim_e, double h_alpha_a_given_re,
                              double log2_f, ExpBase base = ExpBase::kTwo);

/// Same bound through the duality rewrite -n H_alpha(A|RE) =
/// +n H_alphatilde(A|B); agrees with the direct form whenever both entropies
/// come from a common purification.
double decoupling_error_bound_dual(double alpha, int n, std::int64_t dim_r,
                                   std::int64_t dim_e,
                                   double h_alphatilde_a_given_b, double log2_f,
                                   ExpBase base = ExpBase::kTwo);

/// Twirling error bound:
///   8 * base^{ ((alpha-1)/2alpha) (dimB dimR log2(n+1) - n H_alpha(A|BR)
///               - log2_m + log2_f) }.
double twirl_error_bound(double alpha, int n, std::int64_t dim_b,
                         std::int64_t dim_r, double h_alpha_a_given_br,
                         double log2_m, double log2_f,
                         ExpBase base = ExpBase::kTwo);

/// Achievable rate in bits per copy:
///   H_alphatilde(A|B) - H_alpha(A|BR) + (dimE + dimB) dimR log2(n+1)/n
///   + delta.
double achievable_rate(double alpha, double delta, int n, std::int64_t dim_b,
                       std::int64_t dim_r, std::int64_t dim_e,
                       double h_alphatilde_a_given_b,
                       double h_alpha_a_given_br);

/// The asymptotic rate target I(A;R|B) for a tripartite density with factors
/// [A, B, R] in layout order.
double asymptotic_rate(const DensityOperator& rho);

/// A bound above this value says nothing (2 is the trace-norm maximum).
inline constexpr double kVacuousThreshold = 2.0;

/// Closed-form bounds and rates for one parameter point.
struct BoundReport {
  double alpha = 0.0;
  double alpha_tilde = 0.0;
  int n = 0;
  std::int64_t dim_a = 0, dim_b = 0, dim_r = 0, dim_e = 0;
  double log2_f = 0.0;
  double log2_m = 0.0;
  double h_alphatilde_a_given_b = 0.0;
  double h_alpha_a_given_br = 0.0;
  double eps_bound = 0.0;
  double theta_bound = 0.0;
  double chain_bound_erasure = 0.0;  // 2 Xi(eps_bound) + 2 theta_bound
  double rate = 0.0;                 // log2_m / n (realized)
  double rate_formula = 0.0;         // achievable_rate(...)
  double cmi_target = 0.0;
  bool vacuous = false;              // either bound exceeds 2; never clipped
  std::string purification_note;     // environment-dimension choice
};

BoundReport make_bound_report(double alpha, double delta, int n,
                              std::int64_t dim_a, std::int64_t dim_b,
                              std::int64_t dim_r, std::int64_t dim_e,
                              double log2_f, double log2_m,
                              double h_alphatilde_a_given_b,
                              double h_alpha_a_given_br, double cmi_target,
                              ExpBase base = ExpBase::kTwo);

}  // namespace qdecon

#endif  // QDECON_BOUNDS_HPP
