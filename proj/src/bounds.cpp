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

#include "qdecon/bounds.hpp"

#include <cmath>

#include "qdecon/entropy.hpp"
#include "qdecon/errors.hpp"

namespace qdecon {

namespace {

double exp_in_base(double exponent_bits, ExpBase base) {
  return base == ExpBase::kTwo ? std::exp2(exponent_bits)
                               : std::exp(exponent_bits);
}

}  // namespace

double alignment_bound(double eps) {
  if (eps < 0.0) {
    throw NumericError("alignment_bound: eps = " + std::to_string(eps) +
                       " is negative");
  }
  return std::sqrt(eps * (2.0 + eps + 2.0 * std::sqrt(1.0 + eps)));
}

double decoupling_error_bound(double alpha, int n, std::int64_t dim_r,
                              std::int64_t dim_e, double h_alpha_a_given_re,
                              double log2_f, ExpBase base) {
  const double kappa = (alpha - 1.0) / (2.0 * alpha);
  const double exponent =
      kappa * (static_cast<double>(dim_r * dim_e) * std::log2(n + 1.0) -
               n * h_alpha_a_given_re - log2_f);
  return 8.0 * exp_in_base(exponent, base);
}

double decoupling_error_bound_dual(double alpha, int n, std::int64_t dim_r,
                                   std::int64_t dim_e,
                                   double h_alphatilde_a_given_b,
                                   double log2_f, ExpBase base) {
  return decoupling_error_bound(alpha, n, dim_r, dim_e,
                                -h_alphatilde_a_given_b, log2_f, base);
}

double twirl_error_bound(double alpha, int n, std::int64_t dim_b,
                         std::int64_t dim_r, double h_alpha_a_given_br,
                         double log2_m, double log2_f, ExpBase base) {
  const double kappa = (alpha - 1.0) / (2.0 * alpha);
  const double exponent =
      kappa * (static_cast<double>(dim_b * dim_r) * std::log2(n + 1.0) -
               n * h_alpha_a_given_br - log2_m + log2_f);
  return 8.0 * exp_in_base(exponent, base);
}

double achievable_rate(double alpha, double delta, int n, std::int64_t dim_b,
                       std::int64_t dim_r, std::int64_t dim_e,
                       double h_alphatilde_a_given_b,
                       double h_alpha_a_given_br) {
  (void)alpha;  // the alpha dependence enters through the entropies
  return h_alphatilde_a_given_b - h_alpha_a_given_br +
         static_cast<double>((dim_e + dim_b) * dim_r) * std::log2(n + 1.0) / n +
         delta;
}

double asymptotic_rate(const DensityOperator& rho) {
  const auto& factors = rho.layout().factors();
  if (factors.size() != 3) {
    throw LayoutError("asymptotic_rate expects a tripartite [A, B, R] layout");
  }
  return cmi(rho, {factors[0].label}, {factors[2].label}, {factors[1].label});
}

BoundReport make_bound_report(double alpha, double delta, int n,
                              std::int64_t dim_a, std::int64_t dim_b,
                              std::int64_t dim_r, std::int64_t dim_e,
                              double log2_f, double log2_m,
                              double h_alphatilde_a_given_b,
                              double h_alpha_a_given_br, double cmi_target,
                              ExpBase base) {
  BoundReport report;
  report.alpha = alpha;
  report.alpha_tilde = dual_alpha(alpha);
  report.n = n;
  report.dim_a = dim_a;
  report.dim_b = dim_b;
  report.dim_r = dim_r;
  report.dim_e = dim_e;
  report.log2_f = log2_f;
  report.log2_m = log2_m;
  report.h_alphatilde_a_given_b = h_alphatilde_a_given_b;
  report.h_alpha_a_given_br = h_alpha_a_given_br;
  report.eps_bound = decoupling_error_bound_dual(
      alpha, n, dim_r, dim_e, h_alphatilde_a_given_b, log2_f, base);
  report.theta_bound = twirl_error_bound(alpha, n, dim_b, dim_r,
                                         h_alpha_a_given_br, log2_m, log2_f,
                                         base);
  report.chain_bound_erasure =
      2.0 * alignment_bound(report.eps_bound) + 2.0 * report.theta_bound;
  report.rate = log2_m / n;
  report.rate_formula = achievable_rate(alpha, delta, n, dim_b, dim_r, dim_e,
                                        h_alphatilde_a_given_b,
                                        h_alpha_a_given_br);
  report.cmi_target = cmi_target;
  report.vacuous = report.eps_bound > kVacuousThreshold ||
                   report.theta_bound > kVacuousThreshold;
  report.purification_note =
      "minimal-rank purification: dim_e = rank(rho) keeps the log2(n+1) "
      "correction smallest";
  return report;
}

}  // namespace qdecon
