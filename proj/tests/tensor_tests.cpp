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
#include <complex>

#include "qdecon/random.hpp"
#include "qdecon/states.hpp"
#include "qdecon/tensor.hpp"
#include "qdecon/unitaries.hpp"

using namespace qdecon;

namespace {

// Brute-force oracles, written against the row-major index convention
// independently of the library implementations.

Matrix oracle_kron(const Matrix& a, const Matrix& b) {
  const auto da = a.rows();
  const auto db = b.rows();
  Matrix out(da * db, da * db);
  for (Eigen::Index ia = 0; ia < da; ++ia)
    for (Eigen::Index ib = 0; ib < db; ++ib)
      for (Eigen::Index ja = 0; ja < da; ++ja)
        for (Eigen::Index jb = 0; jb < db; ++jb)
          out(ia * db + ib, ja * db + jb) = a(ia, ja) * b(ib, jb);
  return out;
}

// Trace over the middle factor of a three-factor operator (d0, d1, d2),
// keeping factors 0 and 2.
Matrix oracle_trace_middle(const Matrix& m, int d0, int d1, int d2) {
  Matrix out = Matrix::Zero(d0 * d2, d0 * d2);
  for (int i0 = 0; i0 < d0; ++i0)
    for (int i2 = 0; i2 < d2; ++i2)
      for (int j0 = 0; j0 < d0; ++j0)
        for (int j2 = 0; j2 < d2; ++j2) {
          Complex sum = 0.0;
          for (int t = 0; t < d1; ++t)
            sum += m((i0 * d1 + t) * d2 + i2, (j0 * d1 + t) * d2 + j2);
          out(i0 * d2 + i2, j0 * d2 + j2) = sum;
        }
  return out;
}

double oracle_abs_eig_sum(const Matrix& m) {
  Eigen::ComplexEigenSolver<Matrix> es(m);
  return es.eigenvalues().cwiseAbs().sum();
}

Matrix pauli_x() {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

Matrix pauli_z() {
  Matrix z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

Operator single(const std::string& label, const Matrix& m) {
  return Operator(SubsystemLayout::single(label, m.rows()), m);
}

}  // namespace

TEST_CASE("kron prepends a trivial factor unchanged") {
  Matrix m = ginibre_matrix(3, 3, 1);
  Operator unit = single("U", Matrix::Identity(1, 1));
  Operator op = single("M", m);
  Operator out = kron(unit, op);
  CHECK(out.layout.total_dim() == 3);
  CHECK(max_abs_diff(out.mat, m) == 0.0);
}

TEST_CASE("kron of diagonal projectors lands on the expected slot") {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 1.0;
  Matrix b = Matrix::Zero(2, 2);
  b(1, 1) = 1.0;
  Operator out = kron(single("A", a), single("B", b));
  Eigen::Vector4d expect(0, 1, 0, 0);
  for (int i = 0; i < 4; ++i) {
    CHECK(out.mat(i, i).real() == doctest::Approx(expect(i)));
  }
}

TEST_CASE("kron matches the brute-force index formula") {
  Operator x = single("A", pauli_x());
  Operator z = single("B", pauli_z());
  CHECK(max_abs_diff(kron(x, z).mat, oracle_kron(pauli_x(), pauli_z())) == 0.0);

  Matrix a = ginibre_matrix(3, 3, 7);
  Matrix b = ginibre_matrix(4, 4, 8);
  CHECK(max_abs_diff(kron(single("A", a), single("B", b)).mat,
                     oracle_kron(a, b)) < 1e-14);
}

TEST_CASE("kron rejects duplicate labels") {
  Operator a = single("A", Matrix::Identity(2, 2));
  CHECK_THROWS_AS(kron(a, a), LayoutError);
}

TEST_CASE("trace norm is multiplicative over kron") {
  for (int k = 0; k < 10; ++k) {
    Matrix a = ginibre_matrix(3, 3, 100 + k);
    Matrix b = ginibre_matrix(2, 2, 200 + k);
    const double combined = trace_norm(kron(single("A", a), single("B", b)));
    CHECK(combined ==
          doctest::Approx(trace_norm(a) * trace_norm(b)).epsilon(1e-9));
  }
}

TEST_CASE("partial trace of a product state returns the kept factor") {
  DensityOperator rho_a = random_density(SubsystemLayout::single("A", 2), 2, 3);
  DensityOperator rho_b = random_density(SubsystemLayout::single("B", 3), 3, 4);
  Operator joint = kron(rho_a.op(), rho_b.op());
  Operator out = partial_trace(joint, {"A"});
  CHECK(max_abs_diff(out.mat, rho_a.mat()) < 1e-14);
}

TEST_CASE("partial trace of a maximally entangled pair is maximally mixed") {
  Vector phi = Vector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  Operator joint(SubsystemLayout({{"A", 2}, {"B", 2}}), phi * phi.adjoint());
  Operator out = partial_trace(joint, {"A"});
  CHECK(max_abs_diff(out.mat, Matrix::Identity(2, 2) / 2.0) < 1e-15);
}

TEST_CASE("partial trace matches the brute-force summation oracle") {
  SubsystemLayout layout({{"A", 2}, {"B", 3}, {"C", 2}});
  Matrix m = ginibre_matrix(12, 12, 5);
  Operator op(layout, m);
  Operator out = partial_trace(op, {"A", "C"});
  CHECK(max_abs_diff(out.mat, oracle_trace_middle(m, 2, 3, 2)) < 1e-12);
}

TEST_CASE("partial trace preserves the trace and rejects unknown labels") {
  SubsystemLayout layout({{"A", 2}, {"B", 4}});
  Matrix m = ginibre_matrix(8, 8, 6);
  Operator op(layout, m);
  Operator out = partial_trace(op, {"B"});
  CHECK(std::abs(out.mat.trace() - m.trace()) < 1e-12);
  CHECK_THROWS_AS(partial_trace(op, {"Q"}), LayoutError);
}

TEST_CASE("trace distance contracts under partial trace") {
  SubsystemLayout ab({{"A", 2}, {"B", 2}});
  for (int k = 0; k < 100; ++k) {
    DensityOperator sigma = random_density(ab, 4, 1000 + k);
    DensityOperator tau = random_density(ab, 4, 2000 + k);
    const double local = trace_norm(partial_trace(sigma.op(), {"A"}).mat -
                                    partial_trace(tau.op(), {"A"}).mat);
    const double global = trace_norm(sigma.mat() - tau.mat());
    CHECK(local <= global + 1e-10);
  }
}

TEST_CASE("permutations leave the abstract operator unchanged") {
  SubsystemLayout layout({{"A", 2}, {"B", 3}});
  Matrix m = ginibre_matrix(6, 6, 9);
  Operator op(layout, m);

  Operator same = permute_subsystems(op, {"A", "B"});
  CHECK(same.mat == op.mat);

  DensityOperator rho_a = random_density(SubsystemLayout::single("A", 2), 2, 1);
  DensityOperator rho_b = random_density(SubsystemLayout::single("B", 3), 3, 2);
  Operator swapped =
      permute_subsystems(kron(rho_a.op(), rho_b.op()), {"B", "A"});
  CHECK(max_abs_diff(swapped.mat, kron(rho_b.op(), rho_a.op()).mat) < 1e-15);

  Operator round_trip =
      permute_subsystems(permute_subsystems(op, {"B", "A"}), {"A", "B"});
  CHECK(round_trip.mat == op.mat);  // bit-exact

  CHECK_THROWS_AS(permute_subsystems(op, {"A", "A"}), LayoutError);
  CHECK_THROWS_AS(permute_subsystems(op, {"A"}), LayoutError);
}

TEST_CASE("trace norm basics") {
  CHECK(trace_norm(Matrix::Zero(3, 3)) == 0.0);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = -0.5;
  CHECK(trace_norm(d) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("trace norm of a Hermitian difference matches an independent "
          "eigensolver path") {
  SubsystemLayout ab({{"A", 2}, {"B", 3}});
  for (int k = 0; k < 20; ++k) {
    DensityOperator sigma = random_density(ab, 6, 3000 + k);
    DensityOperator tau = random_density(ab, 6, 4000 + k);
    Matrix diff = sigma.mat() - tau.mat();
    CHECK(trace_norm(diff) ==
          doctest::Approx(oracle_abs_eig_sum(diff)).epsilon(1e-10));
  }
}

TEST_CASE("trace norm of a general matrix matches the singular value sum") {
  for (int k = 0; k < 10; ++k) {
    Matrix m = ginibre_matrix(5, 5, 500 + k);
    Eigen::JacobiSVD<Matrix> svd(m);
    CHECK(trace_norm(m) ==
          doctest::Approx(svd.singularValues().sum()).epsilon(1e-10));
  }
}

TEST_CASE("eig_hermitian basics and reconstruction") {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 0.25;
  d(1, 1) = 0.75;
  EigResult eig = eig_hermitian(d);
  CHECK(eig.eigenvalues(0) == doctest::Approx(0.25));
  CHECK(eig.eigenvalues(1) == doctest::Approx(0.75));

  EigResult px = eig_hermitian(pauli_x());
  CHECK(px.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(px.eigenvalues(1) == doctest::Approx(1.0));

  Matrix g = ginibre_matrix(6, 6, 11);
  Matrix herm = (g + g.adjoint()) / 2.0;
  EigResult eh = eig_hermitian(herm);
  Matrix rebuilt = eh.eigenvectors *
                   eh.eigenvalues.cast<Complex>().asDiagonal() *
                   eh.eigenvectors.adjoint();
  CHECK(max_abs_diff(rebuilt, herm) < 1e-10);

  CHECK_THROWS_AS(eig_hermitian(ginibre_matrix(4, 4, 12)), NumericError);
}

TEST_CASE("matrix_power_psd handles powers, cutoffs, and rejections") {
  Matrix id = Matrix::Identity(3, 3);
  CHECK(max_abs_diff(matrix_power_psd(id, 0.37), id) < 1e-14);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  Matrix root = matrix_power_psd(d, 0.5);
  CHECK(root(0, 0).real() == doctest::Approx(2.0));
  CHECK(root(1, 1).real() == doctest::Approx(3.0));

  Matrix g = ginibre_matrix(4, 4, 13);
  Matrix psd = g * g.adjoint();
  CHECK(max_abs_diff(matrix_power_psd(psd, 2.0), psd * psd) < 1e-10);

  // Pseudo-inverse on a singular input: M M^+ M = M.
  Matrix low = g.leftCols(2) * g.leftCols(2).adjoint();
  Matrix pinv = matrix_power_psd(low, -1.0);
  CHECK(max_abs_diff(low * pinv * low, low) < 1e-9);

  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.0;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(matrix_power_psd(neg, 0.5), NumericError);
}

TEST_CASE("conjugate_apply basics") {
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.7;
  Operator sigma = single("A", diag);
  Operator id = single("A", Matrix::Identity(2, 2));
  CHECK(max_abs_diff(conjugate_apply(id, sigma).mat, sigma.mat) == 0.0);

  Operator x = single("A", pauli_x());
  Matrix flipped = conjugate_apply(x, sigma).mat;
  CHECK(flipped(0, 0).real() == doctest::Approx(0.7));
  CHECK(flipped(1, 1).real() == doctest::Approx(0.3));

  Operator wrong = single("B", Matrix::Identity(3, 3));
  CHECK_THROWS_AS(conjugate_apply(wrong, sigma), ShapeError);
}

TEST_CASE("unitary conjugation preserves spectrum and trace") {
  SubsystemLayout a = SubsystemLayout::single("A", 4);
  DensityOperator rho = random_density(a, 4, 21);
  Operator u = haar_unitary(a, 22);
  Operator rotated = conjugate_apply(u, rho.op());
  CHECK(std::abs(rotated.mat.trace() - rho.mat().trace()) < 1e-12);
  EigResult before = eig_hermitian(rho.op());
  EigResult after = eig_hermitian(rotated);
  for (Eigen::Index i = 0; i < before.eigenvalues.size(); ++i) {
    CHECK(after.eigenvalues(i) ==
          doctest::Approx(before.eigenvalues(i)).epsilon(1e-10));
  }
}

TEST_CASE("non-square conjugate_apply maps between layouts") {
  SubsystemLayout a = SubsystemLayout::single("A", 4);
  SubsystemLayout f = SubsystemLayout::single("F", 2);
  DensityOperator rho = random_density(a, 4, 31);
  Matrix w = haar_unitary_matrix(4, 32).topRows(2);
  Operator out = conjugate_apply(w, f, rho.op());
  CHECK(out.layout == f);
  CHECK(max_abs_diff(out.mat, w * rho.mat() * w.adjoint()) == 0.0);

  CHECK_THROWS_AS(conjugate_apply(w, a, rho.op()), ShapeError);
}

TEST_CASE("conjugate_on_leading equals the explicit Kronecker conjugation") {
  SubsystemLayout layout({{"A", 3}, {"B", 4}});
  Matrix m = ginibre_matrix(12, 12, 41);
  Operator op(layout, (m + m.adjoint()) / 2.0);
  Matrix v = haar_unitary_matrix(3, 42);
  Operator fast = conjugate_on_leading(v, op);
  Matrix big = oracle_kron(v, Matrix::Identity(4, 4));
  CHECK(max_abs_diff(fast.mat, big * op.mat * big.adjoint()) < 1e-12);

  CHECK_THROWS_AS(conjugate_on_leading(haar_unitary_matrix(5, 1), op),
                  ShapeError);
}

TEST_CASE("apply_on_leading equals the explicit dense map") {
  Vector v = random_unit_vector(12, 51);
  Matrix w = haar_unitary_matrix(3, 52).topRows(2);  // maps dim 3 -> 2
  Vector fast = apply_on_leading(w, v);
  Matrix full = Matrix::Zero(2 * 4, 12);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      full.block(i * 4, j * 4, 4, 4) = w(i, j) * Matrix::Identity(4, 4);
  CHECK((fast - full * v).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(apply_on_leading(haar_unitary_matrix(5, 2), v), ShapeError);
}
