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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qdecon/harness.hpp"
#include "qdecon/protocol.hpp"
#include "qdecon/random.hpp"

using namespace qdecon;

namespace {

DensityOperator random_abr(std::int64_t dim_a, std::int64_t rank,
                           std::uint64_t seed) {
  return random_density(SubsystemLayout({{"A", dim_a}, {"B", 2}, {"R", 2}}),
                        rank, seed);
}

void check_chain(const ProtocolRun& run) {
  const double budget = alignment_bound(run.eps_emp) + run.theta_emp;
  CHECK(run.erasure_err <= 2.0 * budget + 1e-9);
  CHECK(run.marginal_err <= budget + 1e-9);
  CHECK(run.product_ref_err <= budget + 1e-9);
  CHECK(run.alignment_residual <= alignment_bound(run.eps_emp) + 1e-9);
  CHECK(run.decon_err == run.erasure_err);  // same code path, bit-identical
  CHECK(run.erasure_err >= 0.0);
  CHECK(run.erasure_err <= 2.0 + 1e-9);
  CHECK(run.marginal_err <= 2.0 + 1e-9);
}

}  // namespace

TEST_CASE("auto sizes clamp to the maximum for a conditionally trivial "
          "state") {
  // pi^A (x) rho^{BR}: H_at(A|B) = log2 |A| = 1, so the size formula tops
  // out at n log2 |A| immediately.
  DensityOperator rho = DensityOperator(
      kron(maximally_mixed(SubsystemLayout::single("A", 2)).op(),
           random_density(SubsystemLayout({{"B", 2}, {"R", 2}}), 4, 3).op()));
  ProtocolConfig config;
  config.rho = rho;
  config.n = 1;
  config.alpha = 2.0;
  config.delta = 0.0;
  SizeChoice sizes = choose_sizes(config);
  CHECK(sizes.dim_f == 2);
  CHECK(sizes.log2_f == doctest::Approx(1.0));
  CHECK(sizes.log2_f_raw >= 1.0);
}

TEST_CASE("oversized delta clamps the unitary count with a warning flag") {
  ProtocolConfig config;
  config.rho = random_abr(2, 8, 5);
  config.n = 1;
  config.alpha = 2.0;
  config.delta = 50.0;
  SizeChoice sizes = choose_sizes(config);
  CHECK(sizes.clamped_m);
  CHECK(sizes.num_unitaries == sizes.dim_f * sizes.dim_f);
  CHECK(sizes.log2_m == doctest::Approx(2.0 * sizes.log2_f));
}

TEST_CASE("zero-entropy classical input reduces the size formula to its "
          "counting terms") {
  // Even classical mixture of |000> and |111>: H_at(A|B) = H_a(A|BR) = 0.
  Vector diag = Vector::Zero(8);
  diag(0) = diag(7) = 0.5;
  DensityOperator rho(SubsystemLayout({{"A", 2}, {"B", 2}, {"R", 2}}),
                      Matrix(diag.asDiagonal()));
  ProtocolConfig config;
  config.rho = rho;
  config.n = 1;
  config.alpha = 2.0;
  config.delta = 0.1;
  SizeChoice sizes = choose_sizes(config);
  // Purification rank is 2, so the raw formula is ceil(|R||E| log2 2 + 0.05).
  CHECK(sizes.log2_f_raw == doctest::Approx(std::ceil(2.0 * 2.0 + 0.05)));
  CHECK(sizes.clamped_f);  // 5 bits clamp to n log2|A| = 1
  CHECK(sizes.dim_f == 2);
}

TEST_CASE("a product state with pure erased system runs with zero error") {
  DensityOperator rho = builtin_state("product", 0, 0);
  ProtocolConfig config;
  config.rho = rho;
  config.n = 1;
  config.alpha = 2.0;
  config.delta = 0.0;
  config.log2_f = 0;
  config.log2_m = 0;
  config.seed = 11;
  ProtocolRun run = run_protocol(config);
  CHECK(run.erasure_err <= 1e-9);
  CHECK(run.marginal_err <= 1e-9);
  CHECK(run.decon_err <= 1e-9);
  CHECK(run.bounds.cmi_target == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("classically correlated A-R with a trivial conditioner") {
  Vector diag = Vector::Zero(4);
  diag(0) = diag(3) = 0.5;
  DensityOperator rho(SubsystemLayout({{"A", 2}, {"B", 1}, {"R", 2}}),
                      Matrix(diag.asDiagonal()));
  ProtocolConfig config;
  config.rho = rho;
  config.n = 1;
  config.alpha = 2.0;
  config.delta = 0.1;
  config.log2_f = 0;  // |F| = 1 forces M = 1
  config.log2_m = 0;
  config.seed = 21;
  ProtocolRun run = run_protocol(config);
  CHECK(run.decon_err == run.erasure_err);
  CHECK(run.erasure_err >= 0.0);
  CHECK(run.erasure_err <= 2.0);
  check_chain(run);
}

TEST_CASE("two-copy random run satisfies the measured chain inequalities") {
  ProtocolConfig config;
  config.rho = random_abr(2, 8, 31);
  config.n = 2;
  config.alpha = 2.0;
  config.delta = 0.1;
  config.num_u_candidates = 8;
  config.seed = 32;
  ProtocolRun run = run_protocol(config);
  check_chain(run);
  CHECK(run.eps_candidates.size() == 8);
  CHECK(run.theta_candidates.size() == 8);

  // Chosen candidate minimizes max(eps, theta) with ties to the lowest index.
  double best = std::max(run.eps_candidates[run.chosen_candidate],
                         run.theta_candidates[run.chosen_candidate]);
  for (int k = 0; k < 8; ++k) {
    const double score =
        std::max(run.eps_candidates[k], run.theta_candidates[k]);
    CHECK(best <= score + 1e-15);
    if (k < run.chosen_candidate) CHECK(score > best);
  }
}

TEST_CASE("partial sizes exercise nonzero residuals and still satisfy the "
          "chain") {
  for (std::uint64_t seed : {41, 42, 43, 44, 45}) {
    ProtocolConfig config;
    config.rho = random_abr(4, 16, seed);  // two-qubit erased system
    config.n = 1;
    config.alpha = 2.0;
    config.delta = 0.1;
    config.log2_f = 1;  // |F| = 2 < |A| = 4: genuine partial isometry
    config.log2_m = 1;  // M = 2 < |F|^2: genuine partial twirl
    config.seed = seed * 7;
    ProtocolRun run = run_protocol(config);
    CHECK(run.eps_emp > 1e-3);    // residuals genuinely nonzero
    CHECK(run.theta_emp > 1e-3);
    check_chain(run);
    // The projected state's trace mass lives in (0, dimA^n / dimF].
    CHECK(run.renormalization > 0.0);
    CHECK(run.renormalization <= 4.0 / 2.0 + 1e-12);
    CHECK(run.uhlmann_overlap <= 1.0 + 1e-12);
  }
}

TEST_CASE("full twirl with a maximal target space depolarizes exactly") {
  ProtocolConfig config;
  config.rho = random_abr(2, 8, 51);
  config.n = 2;
  config.alpha = 2.0;
  config.delta = 0.1;
  config.log2_f = 2;  // |F| = |A|^2
  config.log2_m = 4;  // M = |F|^2
  config.seed = 52;
  ProtocolRun run = run_protocol(config);
  // Tracing F after the channel is then a full trace over A^n, so the
  // decoupling residual vanishes identically and the twirl is exact.
  CHECK(run.eps_emp <= 1e-12);
  CHECK(run.theta_emp <= 1e-12);
  CHECK(run.erasure_err <= 1e-9);
}

TEST_CASE("erasure error endpoints and eigenvalue-sum cross-check") {
  SubsystemLayout an = SubsystemLayout::single("A^1", 2);
  SubsystemLayout brn({{"B^1", 2}, {"R^1", 2}});
  DensityOperator sigma_br = random_density(brn, 4, 61);

  Matrix zero_proj = Matrix::Zero(2, 2);
  zero_proj(0, 0) = 1.0;
  Operator tau_zero(an, zero_proj);
  DensityOperator upsilon =
      DensityOperator(kron(Operator(an, zero_proj), sigma_br.op()));

  ErasureReport report = erasure_error(upsilon, tau_zero, sigma_br.op());
  CHECK(report.product_distance <= 1e-12);
  CHECK(report.marginal_distance <= 1e-12);

  // Orthogonal tau: distance saturates at 2.
  Matrix one_proj = Matrix::Zero(2, 2);
  one_proj(1, 1) = 1.0;
  ErasureReport far = erasure_error(upsilon, Operator(an, one_proj),
                                    sigma_br.op());
  CHECK(far.product_distance == doctest::Approx(2.0).epsilon(1e-9));

  // Independent eigenvalue-sum oracle on the assembled difference.
  DensityOperator mixed = random_density(
      SubsystemLayout({{"A^1", 2}, {"B^1", 2}, {"R^1", 2}}), 8, 62);
  Operator tau_pi(an, Matrix::Identity(2, 2) / 2.0);
  ErasureReport er = erasure_error(mixed, tau_pi, sigma_br.op());
  Operator ups_br = partial_trace(mixed.op(), {"B^1", "R^1"});
  Matrix diff = mixed.mat() - kron(tau_pi, ups_br).mat;
  Eigen::ComplexEigenSolver<Matrix> es(diff);
  CHECK(er.product_distance ==
        doctest::Approx(es.eigenvalues().cwiseAbs().sum()).epsilon(1e-10));
}

TEST_CASE("deconstruction error is the erasure error of the embedded mixed "
          "state") {
  SubsystemLayout an = SubsystemLayout::single("A^1", 4);
  SubsystemLayout f = SubsystemLayout::single("F", 2);
  PartialIsometry iso = make_partial_isometry(an, f, 71);
  DensityOperator sigma_br =
      random_density(SubsystemLayout({{"B^1", 2}, {"R^1", 2}}), 4, 72);

  // Upsilon already of recovered form: zero distance.
  DensityOperator recovered =
      DensityOperator(kron(iso.embedded_mixed(), sigma_br.op()));
  CHECK(deconstruction_error(recovered, iso) <= 1e-12);

  DensityOperator mixed = random_density(
      SubsystemLayout({{"A^1", 4}, {"B^1", 2}, {"R^1", 2}}), 16, 73);
  const double decon = deconstruction_error(mixed, iso);
  const double erasure =
      erasure_error(mixed, iso.embedded_mixed(), sigma_br.op())
          .product_distance;
  CHECK(decon == erasure);  // bit-identical via the shared path
  CHECK(decon >= 0.0);
  CHECK(decon <= 2.0 + 1e-12);
}

TEST_CASE("runs are deterministic per seed") {
  ProtocolConfig config;
  config.rho = random_abr(2, 8, 81);
  config.n = 2;
  config.alpha = 1.5;
  config.delta = 0.1;
  config.seed = 82;
  ProtocolRun first = run_protocol(config);
  ProtocolRun second = run_protocol(config);
  CHECK(first.eps_emp == second.eps_emp);
  CHECK(first.theta_emp == second.theta_emp);
  CHECK(first.erasure_err == second.erasure_err);
  CHECK(first.upsilon.mat() == second.upsilon.mat());
}

TEST_CASE("configuration validation") {
  ProtocolConfig config;
  config.rho = random_abr(2, 8, 91);

  config.alpha = 1.0;
  CHECK_THROWS_AS(run_protocol(config), ConfigError);
  config.alpha = 2.5;
  CHECK_THROWS_AS(run_protocol(config), ConfigError);

  config.alpha = 2.0;
  config.n = 0;
  CHECK_THROWS_AS(run_protocol(config), ConfigError);

  config.n = 1;
  config.log2_f = 3;  // exceeds n log2 |A| = 1
  config.log2_m = 0;
  CHECK_THROWS_AS(run_protocol(config), ConfigError);

  config.log2_f = 1;
  config.log2_m = 3;  // exceeds 2 log2_f
  CHECK_THROWS_AS(run_protocol(config), ConfigError);

  config.log2_f.reset();
  config.log2_m.reset();
  config.n = 5;  // density cap: 8^5 = 32768 > 4096
  CHECK_THROWS_AS(run_protocol(config), CapacityError);

  DensityOperator pair = random_density(SubsystemLayout({{"A", 2}, {"B", 2}}),
                                        4, 92);
  config.rho = pair;
  config.n = 1;
  CHECK_THROWS_AS(run_protocol(config), LayoutError);
}
