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

#ifndef QDECON_TENSOR_HPP
#define QDECON_TENSOR_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "qdecon/layout.hpp"

namespace qdecon {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Tolerance below which an operator counts as Hermitian / PSD.
inline constexpr double kHermitianTol = 1e-10;
/// Eigenvalues below kSupportCutoff * lambda_max count as zero.
inline constexpr double kSupportCutoff = 1e-12;

/// Dense operator over a labeled multipartite layout. Entries follow the
/// row-major composite-index convention of SubsystemLayout.
struct Operator {
  SubsystemLayout layout;
  Matrix mat;

  Operator() = default;
  /// Validates that mat is total_dim x total_dim.
  Operator(SubsystemLayout l, Matrix m);

  std::int64_t dim() const { return layout.total_dim(); }

  static Operator identity(SubsystemLayout l);
  static Operator zero(SubsystemLayout l);
};

/// Tensor product. Layout is a.layout then b.layout; labels must be disjoint.
Operator kron(const Operator& a, const Operator& b);

/// Traces out every factor not in `keep`. Kept factors stay in their
/// original relative order.
Operator partial_trace(const Operator& op, const std::vector<std::string>& keep);

/// Re-indexes entries so the factors appear in `new_order`. The operator is
/// unchanged as an abstract multipartite object; composing with the inverse
/// permutation restores the original entries bit-exactly.
Operator permute_subsystems(const Operator& op,
                            const std::vector<std::string>& new_order);

/// Sum of singular values. Hermitian inputs (within 1e-12 relative) use a
/// direct eigenvalue sum; general inputs go through the Hermitian embedding
/// [[0, X], [X^dag, 0]], whose positive spectrum is the singular spectrum.
double trace_norm(const Matrix& m);
double trace_norm(const Operator& op);

struct EigResult {
  Eigen::VectorXd eigenvalues;  // ascending
  Matrix eigenvectors;          // columns, unitary
};

/// Eigendecomposition of a Hermitian operator. The input is symmetrized as
/// (op + op^dag)/2 before decomposition; deviations beyond kHermitianTol are
/// rejected. Reconstruction V diag(w) V^dag matches the input within 1e-10.
EigResult eig_hermitian(const Operator& op);
EigResult eig_hermitian(const Matrix& m);

/// Fractional/negative power of a PSD operator via its eigendecomposition.
/// Eigenvalues below the support cutoff are treated as exactly zero: they
/// contribute zero for p > 0 and are excluded for p < 0 (pseudo-inverse).
/// Rejects inputs with negative eigenvalues beyond tolerance.
Operator matrix_power_psd(const Operator& op, double p);
Matrix matrix_power_psd(const Matrix& m, double p);

/// x sigma x^dag for square x acting on sigma's full space.
Operator conjugate_apply(const Operator& x, const Operator& sigma);

/// x sigma x^dag for a possibly non-square x mapping sigma's space into
/// `out_layout` (isometry-shaped: rows = out dim, cols = sigma dim).
Operator conjugate_apply(const Matrix& x, const SubsystemLayout& out_layout,
                         const Operator& sigma);

/// (v (x) 1) sigma (v (x) 1)^dag where v covers the leading factors of
/// sigma's layout (v must be square with dim equal to a prefix product of
/// factor dims). Cheaper than building the full Kronecker factor.
Operator conjugate_on_leading(const Matrix& v, const Operator& sigma);

/// Non-square variant: m maps the leading factors (m.cols(), a prefix
/// product) into out_layout's leading factors (m.rows()); trailing factors
/// ride along and must match between the two layouts.
Operator conjugate_on_leading(const Matrix& m, const Operator& sigma,
                              const SubsystemLayout& out_layout);

/// (m (x) 1) v where m acts on the leading composite index of v (m's column
/// count must divide the vector length). Rows may differ from columns, so an
/// isometry can shrink the leading factor.
Vector apply_on_leading(const Matrix& m, const Vector& v);

/// Index map realizing a factor permutation: entry i of the original
/// composite index goes to map[i] in the permuted order. Validates that
/// new_order is a permutation of the layout's labels.
std::vector<std::int64_t> permutation_index_map(
    const SubsystemLayout& layout, const std::vector<std::string>& new_order);

/// max_ij |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace qdecon

#endif  // QDECON_TENSOR_HPP
