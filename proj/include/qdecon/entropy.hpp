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

#ifndef QDECON_ENTROPY_HPP
#define QDECON_ENTROPY_HPP

#include <string>
#include <vector>

#include "qdecon/states.hpp"

namespace qdecon {

/// All entropies are in bits (logarithms base 2).

/// Parameters of the Renyi-entropy family and its conditioning optimizer.
/// alpha = 1 selects the von Neumann limit. The primary range is (1, 2];
/// values in (1/2, 1) are accepted so the duality partner alpha/(2 alpha - 1)
/// can be evaluated with the same formula and minimizer.
struct EntropyParams {
  double alpha = 1.0;
  double tolerance = 1e-10;
  int max_iterations = 2000;
};

/// -sum lambda log2 lambda over eigenvalues above the support cutoff.
double von_neumann(const DensityOperator& rho);

/// (1/(1-alpha)) log2 sum lambda^alpha; alpha = 1 gives von_neumann.
double renyi_entropy(const DensityOperator& rho, double alpha);

/// H(AB) - H(B) from the marginals on a+b and b.
double conditional_entropy(const DensityOperator& rho,
                           const std::vector<std::string>& a,
                           const std::vector<std::string>& b);

/// Conditional mutual information H(A|B) - H(A|RB).
double cmi(const DensityOperator& rho, const std::vector<std::string>& a,
           const std::vector<std::string>& r,
           const std::vector<std::string>& b);

/// Sandwiched Renyi divergence
///   (1/(alpha-1)) log2 Tr[(sigma^{(1-alpha)/2alpha} rho
///                          sigma^{(1-alpha)/2alpha})^alpha].
/// For alpha > 1 a support violation (rho not contained in sigma's support)
/// returns +infinity rather than throwing. alpha = 1 evaluates the quantum
/// relative entropy. sigma must be PSD on the same space as rho.
double sandwiched_divergence(const DensityOperator& rho, const Operator& sigma,
                             double alpha);

/// Optimized sandwiched Renyi conditional entropy
///   H_alpha(A|C) = -min over states sigma on C of
///                  sandwiched_divergence(rho^{AC}, 1_A (x) sigma, alpha),
/// computed by a fixed-point iteration with a quasi-Newton polish over a
/// Cholesky parameterization. Throws NonConvergenceError (carrying the best
/// value found and the final step size) if the iteration budget is exhausted
/// before the value settles within params.tolerance.
double renyi_conditional(const DensityOperator& rho,
                         const std::vector<std::string>& a,
                         const std::vector<std::string>& c,
                         const EntropyParams& params);

/// Duality partner alpha/(2 alpha - 1), the solution of
/// 1/alpha + 1/alpha_tilde = 2.
double dual_alpha(double alpha);

}  // namespace qdecon

#endif  // QDECON_ENTROPY_HPP
