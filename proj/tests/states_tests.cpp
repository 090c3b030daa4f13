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

#include <sstream>

#include "qdecon/random.hpp"
#include "qdecon/states.hpp"
#include "qdecon/tensor.hpp"

using namespace qdecon;

namespace {

// Permutation matrix sending copy-major digits (a1 b1 a2 b2) to grouped
// digits (a1 a2 b1 b2) for two copies of a two-factor layout; built by
// direct index arithmetic, independent of the library's permutation code.
Matrix grouping_permutation_2x(const std::vector<int>& dims) {
  const int k = static_cast<int>(dims.size());
  int total = 1;
  for (int d : dims) total *= d;
  const int big = total * total;
  Matrix p = Matrix::Zero(big, big);
  for (int i = 0; i < big; ++i) {
    // Decompose copy-major: copy 0 digits, then copy 1 digits.
    std::vector<int> digits(2 * k);
    int rem = i;
    for (int f = 2 * k - 1; f >= 0; --f) {
      const int d = dims[f % k];
      digits[f] = rem % d;
      rem /= d;
    }
    // Regroup: factor-major, copies contiguous.
    int target = 0;
    for (int f = 0; f < k; ++f) {
      for (int c = 0; c < 2; ++c) {
        target = target * dims[f] + digits[c * k + f];
      }
    }
    p(target, i) = 1.0;
  }
  return p;
}

std::vector<double> sorted_eigs(const Operator& op) {
  EigResult eig = eig_hermitian(op);
  std::vector<double> out(eig.eigenvalues.data(),
                          eig.eigenvalues.data() + eig.eigenvalues.size());
  return out;
}

}  // namespace

TEST_CASE("maximally mixed states") {
  DensityOperator pi2 = maximally_mixed(SubsystemLayout::single("A", 2));
  CHECK(pi2.mat()(0, 0).real() == doctest::Approx(0.5));
  CHECK(pi2.mat()(1, 1).real() == doctest::Approx(0.5));

  DensityOperator pi4 = maximally_mixed(SubsystemLayout({{"A", 2}, {"B", 2}}));
  for (int i = 0; i < 4; ++i) {
    CHECK(pi4.mat()(i, i).real() == doctest::Approx(0.25));
  }

  for (std::int64_t d : {2, 3, 7}) {
    DensityOperator pi = maximally_mixed(SubsystemLayout::single("A", d));
    CHECK(std::abs(pi.mat().trace() - Complex(1.0)) < 1e-15);
    CHECK(std::abs((pi.mat() * pi.mat()).trace() - Complex(1.0 / d)) < 1e-15);
  }
}

TEST_CASE("density validation rejects bad inputs") {
  SubsystemLayout a = SubsystemLayout::single("A", 2);
  Matrix not_herm(2, 2);
  not_herm << 1.0, Complex(0, 1.0), Complex(0, 1.0), 0.0;
  CHECK_THROWS_AS(DensityOperator(a, not_herm), NumericError);

  Matrix wrong_trace = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator(a, wrong_trace), NumericError);

  Matrix negative = Matrix::Zero(2, 2);
  negative(0, 0) = 1.5;
  negative(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityOperator(a, negative), NumericError);
}

TEST_CASE("purification of a pure state uses a one-dimensional environment") {
  SubsystemLayout a = SubsystemLayout::single("A", 2);
  Matrix proj = Matrix::Zero(2, 2);
  proj(0, 0) = 1.0;
  PureState psi = purify(DensityOperator(a, proj), "E");
  CHECK(psi.layout().dim_of("E") == 1);
  CHECK(std::abs(psi.amplitudes()(0)) == doctest::Approx(1.0));
}

TEST_CASE("purification of the maximally mixed qubit is maximally entangled") {
  PureState psi = purify(maximally_mixed(SubsystemLayout::single("A", 2)), "E");
  CHECK(psi.layout().dim_of("E") == 2);
  Operator marg = partial_trace(psi.to_density().op(), {"A"});
  CHECK(max_abs_diff(marg.mat, Matrix::Identity(2, 2) / 2.0) < 1e-12);
}

TEST_CASE("purification rank matches the eigenvalue count oracle") {
  SubsystemLayout a = SubsystemLayout::single("A", 4);
  DensityOperator rho = random_density(a, 3, 17);
  // Oracle: count eigenvalues above the support cutoff directly.
  EigResult eig = eig_hermitian(rho.op());
  int rank = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > 1e-12 * eig.eigenvalues.maxCoeff()) ++rank;
  }
  CHECK(rank == 3);
  PureState psi = purify(rho, "E");
  CHECK(psi.layout().dim_of("E") == rank);
  Operator recovered = partial_trace(psi.to_density().op(), {"A"});
  CHECK(trace_norm(recovered.mat - rho.mat()) < 1e-9);
}

TEST_CASE("purify then trace out recovers the input on random densities") {
  SubsystemLayout ab({{"A", 2}, {"B", 2}});
  for (int k = 0; k < 100; ++k) {
    const std::int64_t rank = 1 + k % 4;
    DensityOperator rho = random_density(ab, rank, 900 + k);
    PureState psi = purify(rho, "E");
    Operator recovered = partial_trace(psi.to_density().op(), {"A", "B"});
    CHECK(trace_norm(recovered.mat - rho.mat()) < 1e-9);
  }
}

TEST_CASE("purify rejects a colliding environment label") {
  DensityOperator rho = maximally_mixed(SubsystemLayout::single("E", 2));
  CHECK_THROWS_AS(purify(rho, "E"), LayoutError);
}

TEST_CASE("one copy only relabels") {
  SubsystemLayout ab({{"A", 2}, {"B", 2}});
  DensityOperator rho = random_density(ab, 4, 23);
  DensityOperator one = n_copies_grouped(rho, 1);
  CHECK(one.layout().labels() == std::vector<std::string>{"A^1", "B^1"});
  CHECK(one.mat() == rho.mat());
}

TEST_CASE("copies of a product state group factor by factor") {
  DensityOperator rho_a = random_density(SubsystemLayout::single("A", 2), 2, 31);
  DensityOperator rho_b = random_density(SubsystemLayout::single("B", 2), 2, 32);
  DensityOperator joint =
      DensityOperator::unchecked(kron(rho_a.op(), rho_b.op()));
  DensityOperator two = n_copies_grouped(joint, 2);

  Operator aa = kron(Operator(SubsystemLayout::single("x", 2), rho_a.mat()),
                     Operator(SubsystemLayout::single("y", 2), rho_a.mat()));
  Operator bb = kron(Operator(SubsystemLayout::single("x", 2), rho_b.mat()),
                     Operator(SubsystemLayout::single("y", 2), rho_b.mat()));
  Matrix expect = kron(Operator(SubsystemLayout::single("p", 4), aa.mat),
                       Operator(SubsystemLayout::single("q", 4), bb.mat))
                      .mat;
  CHECK(max_abs_diff(two.mat(), expect) < 1e-14);
}

TEST_CASE("two grouped copies match the explicit permutation-matrix oracle") {
  SubsystemLayout ab({{"A", 2}, {"B", 3}});
  DensityOperator rho = random_density(ab, 6, 33);
  DensityOperator two = n_copies_grouped(rho, 2);

  Matrix plain = kron(Operator(SubsystemLayout::single("x", 6), rho.mat()),
                      Operator(SubsystemLayout::single("y", 6), rho.mat()))
                     .mat;
  Matrix p = grouping_permutation_2x({2, 3});
  CHECK(max_abs_diff(two.mat(), p * plain * p.adjoint()) < 1e-12);
}

TEST_CASE("grouped copies have product eigenvalues and unit trace") {
  SubsystemLayout a = SubsystemLayout::single("A", 3);
  DensityOperator rho = random_density(a, 3, 34);
  DensityOperator two = n_copies_grouped(rho, 2);
  CHECK(std::abs(two.mat().trace() - Complex(1.0)) < 1e-12);

  auto base = sorted_eigs(rho.op());
  std::vector<double> products;
  for (double x : base)
    for (double y : base) products.push_back(x * y);
  std::sort(products.begin(), products.end());
  auto got = sorted_eigs(two.op());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i] == doctest::Approx(products[i]).epsilon(1e-9));
  }
}

TEST_CASE("copy counts respect the resource caps") {
  SubsystemLayout abr({{"A", 2}, {"B", 2}, {"R", 2}});
  DensityOperator rho = random_density(abr, 8, 35);
  CHECK_THROWS_AS(n_copies_grouped(rho, 5), CapacityError);
  CHECK_THROWS_AS(n_copies_grouped(rho, 0), ConfigError);

  PureState psi = random_pure(SubsystemLayout({{"A", 8}, {"B", 8}}), 36);
  CHECK_THROWS_AS(n_copies_grouped(psi, 4), CapacityError);
}

TEST_CASE("random densities are seeded, ranked, and reproducible") {
  SubsystemLayout ab({{"A", 2}, {"B", 2}});
  DensityOperator pure = random_density(ab, 1, 40);
  CHECK(std::abs((pure.mat() * pure.mat()).trace() - Complex(1.0)) < 1e-10);

  DensityOperator full = random_density(ab, 4, 41);
  EigResult eig = eig_hermitian(full.op());
  CHECK(eig.eigenvalues.minCoeff() > 0.0);

  DensityOperator again = random_density(ab, 4, 41);
  CHECK(full.mat() == again.mat());  // bit-identical

  CHECK_THROWS_AS(random_density(ab, 0, 42), ConfigError);
  CHECK_THROWS_AS(random_density(ab, 5, 42), ConfigError);
}

TEST_CASE("pure marginals expose Schmidt symmetry across the cut") {
  SubsystemLayout abre({{"A", 2}, {"B", 2}, {"R", 2}, {"E", 2}});
  for (int k = 0; k < 25; ++k) {
    PureState psi = random_pure(abre, 700 + k);
    auto ab = sorted_eigs(marginal(psi, {"A", "B"}).op());
    auto re = sorted_eigs(marginal(psi, {"R", "E"}).op());
    for (std::size_t i = 0; i < ab.size(); ++i) {
      CHECK(std::abs(ab[i] - re[i]) < 1e-9);
    }
  }
}

TEST_CASE("pure-state marginal agrees with the dense partial trace") {
  SubsystemLayout abc({{"A", 2}, {"B", 3}, {"C", 2}});
  PureState psi = random_pure(abc, 55);
  Operator dense = partial_trace(psi.to_density().op(), {"A", "C"});
  DensityOperator fast = marginal(psi, {"A", "C"});
  CHECK(max_abs_diff(dense.mat, fast.mat()) < 1e-13);
  CHECK_THROWS_AS(marginal(psi, {"Q"}), LayoutError);
}

TEST_CASE("pure-state permutation round-trips bit-exactly") {
  SubsystemLayout abc({{"A", 2}, {"B", 3}, {"C", 2}});
  PureState psi = random_pure(abc, 56);
  PureState shuffled = permute_subsystems(psi, {"C", "A", "B"});
  PureState back = permute_subsystems(shuffled, {"A", "B", "C"});
  CHECK(back.amplitudes() == psi.amplitudes());
}

TEST_CASE("as_matrix reshapes consistently with kron structure") {
  PureState a = random_pure(SubsystemLayout::single("A", 3), 57);
  PureState b = random_pure(SubsystemLayout::single("B", 4), 58);
  PureState joint = kron(a, b);
  Matrix m = as_matrix(joint, {"A"});
  // Product state: the reshaped matrix is the outer product of amplitudes.
  CHECK(max_abs_diff(m, a.amplitudes() * b.amplitudes().transpose()) < 1e-14);
}

TEST_CASE("state files round-trip exactly") {
  SubsystemLayout ab({{"A", 2}, {"B", 3}});
  DensityOperator rho = random_density(ab, 4, 60);
  std::stringstream buf;
  save_state(buf, rho);
  DensityOperator back = load_density(buf);
  CHECK(back.layout() == rho.layout());
  CHECK(back.mat() == rho.mat());  // hex floats round-trip bit-exactly

  PureState psi = random_pure(ab, 61);
  std::stringstream buf2;
  save_state(buf2, psi);
  StateVariant v = load_state(buf2);
  REQUIRE(std::holds_alternative<PureState>(v));
  CHECK(std::get<PureState>(v).amplitudes() == psi.amplitudes());
}

TEST_CASE("state files reject malformed input") {
  {
    std::stringstream buf("not a state file\n");
    CHECK_THROWS_AS(load_state(buf), ConfigError);
  }
  {
    std::stringstream buf("qdecon-state v1\nkind density\nlayout A:2\n"
                          "entries 4\n0x1p-1,0x0p+0\n");
    CHECK_THROWS_AS(load_state(buf), ConfigError);  // truncated entries
  }
  {
    std::stringstream buf("qdecon-state v1\nkind density\nlayout A:2\n"
                          "entries 4\nbogus,0x0p+0\n0,0\n0,0\n0,0\n");
    CHECK_THROWS_AS(load_state(buf), ConfigError);
  }
  {
    std::stringstream buf("qdecon-state v1\nkind widget\nlayout A:2\n"
                          "entries 4\n");
    CHECK_THROWS_AS(load_state(buf), ConfigError);
  }
}

TEST_CASE("load_density converts a stored pure state") {
  PureState psi = random_pure(SubsystemLayout::single("A", 4), 62);
  std::stringstream buf;
  save_state(buf, psi);
  DensityOperator rho = load_density(buf);
  CHECK(max_abs_diff(rho.mat(), psi.to_density().mat()) == 0.0);
}
