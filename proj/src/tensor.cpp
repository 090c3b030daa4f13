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

#include "qdecon/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qdecon/errors.hpp"

namespace qdecon {

Operator::Operator(SubsystemLayout l, Matrix m)
    : layout(std::move(l)), mat(std::move(m)) {
  if (mat.rows() != layout.total_dim() || mat.cols() != layout.total_dim()) {
    throw ShapeError("entries are " + std::to_string(mat.rows()) + "x" +
                     std::to_string(mat.cols()) + " but layout dimension is " +
                     std::to_string(layout.total_dim()));
  }
}

Operator Operator::identity(SubsystemLayout l) {
  const auto d = l.total_dim();
  return Operator(std::move(l), Matrix::Identity(d, d));
}

Operator Operator::zero(SubsystemLayout l) {
  const auto d = l.total_dim();
  return Operator(std::move(l), Matrix::Zero(d, d));
}

Operator kron(const Operator& a, const Operator& b) {
  SubsystemLayout layout = a.layout.concat(b.layout);  // rejects label collisions
  const auto da = a.dim();
  const auto db = b.dim();
  Matrix out(da * db, da * db);
  for (std::int64_t i = 0; i < da; ++i) {
    for (std::int64_t j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.mat(i, j) * b.mat;
    }
  }
  return Operator(std::move(layout), std::move(out));
}

Operator partial_trace(const Operator& op,
                       const std::vector<std::string>& keep) {
  std::set<std::string> want(keep.begin(), keep.end());
  for (const auto& l : keep) {
    if (!op.layout.has_label(l)) {
      throw LayoutError("unknown label '" + l + "' in partial_trace");
    }
  }

  const auto& factors = op.layout.factors();
  const auto strides = op.layout.strides();
  std::vector<std::int64_t> keep_dims, keep_strides, tr_dims, tr_strides;
  std::vector<Factor> kept_factors;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    if (want.count(factors[f].label)) {
      kept_factors.push_back(factors[f]);
      keep_dims.push_back(factors[f].dim);
      keep_strides.push_back(strides[f]);
    } else {
      tr_dims.push_back(factors[f].dim);
      tr_strides.push_back(strides[f]);
    }
  }

  SubsystemLayout out_layout(kept_factors);
  const std::int64_t dk = out_layout.total_dim();
  std::int64_t dt = 1;
  for (auto d : tr_dims) dt *= d;

  // Offsets of every kept / traced multi-index in the original matrix.
  std::vector<std::int64_t> keep_offsets(dk, 0);
  for (std::int64_t i = 0; i < dk; ++i) {
    auto digits = decompose_index(i, keep_dims);
    std::int64_t off = 0;
    for (std::size_t f = 0; f < keep_dims.size(); ++f) {
      off += digits[f] * keep_strides[f];
    }
    keep_offsets[i] = off;
  }
  std::vector<std::int64_t> tr_offsets(dt, 0);
  for (std::int64_t t = 0; t < dt; ++t) {
    auto digits = decompose_index(t, tr_dims);
    std::int64_t off = 0;
    for (std::size_t f = 0; f < tr_dims.size(); ++f) {
      off += digits[f] * tr_strides[f];
    }
    tr_offsets[t] = off;
  }

  Matrix out = Matrix::Zero(dk, dk);
  for (std::int64_t i = 0; i < dk; ++i) {
    for (std::int64_t j = 0; j < dk; ++j) {
      Complex sum = 0.0;
      for (std::int64_t t = 0; t < dt; ++t) {
        sum += op.mat(keep_offsets[i] + tr_offsets[t],
                      keep_offsets[j] + tr_offsets[t]);
      }
      out(i, j) = sum;
    }
  }
  return Operator(std::move(out_layout), std::move(out));
}

std::vector<std::int64_t> permutation_index_map(
    const SubsystemLayout& layout, const std::vector<std::string>& new_order) {
  if (new_order.size() != layout.size()) {
    throw LayoutError("new_order has " + std::to_string(new_order.size()) +
                      " labels but layout has " + std::to_string(layout.size()));
  }
  std::set<std::string> seen;
  std::vector<std::size_t> positions;  // positions[k] = old factor at new slot k
  for (const auto& l : new_order) {
    if (!seen.insert(l).second) {
      throw LayoutError("label '" + l + "' repeated in permutation");
    }
    positions.push_back(layout.index_of(l));
  }

  const auto& factors = layout.factors();
  std::vector<std::int64_t> old_dims;
  for (const auto& f : factors) old_dims.push_back(f.dim);
  std::vector<std::int64_t> new_dims;
  for (auto p : positions) new_dims.push_back(old_dims[p]);

  const std::int64_t d = layout.total_dim();
  std::vector<std::int64_t> map(d, 0);
  for (std::int64_t i = 0; i < d; ++i) {
    auto digits = decompose_index(i, old_dims);
    std::vector<std::int64_t> new_digits(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k) {
      new_digits[k] = digits[positions[k]];
    }
    map[i] = compose_index(new_digits, new_dims);
  }
  return map;
}

Operator permute_subsystems(const Operator& op,
                            const std::vector<std::string>& new_order) {
  const auto map = permutation_index_map(op.layout, new_order);
  std::vector<Factor> new_factors;
  for (const auto& l : new_order) {
    new_factors.push_back(op.layout.factors()[op.layout.index_of(l)]);
  }
  SubsystemLayout out_layout(std::move(new_factors));

  const std::int64_t d = op.dim();
  Matrix out(d, d);
  for (std::int64_t i = 0; i < d; ++i) {
    for (std::int64_t j = 0; j < d; ++j) {
      out(map[i], map[j]) = op.mat(i, j);
    }
  }
  return Operator(std::move(out_layout), std::move(out));
}

namespace {

double sum_abs_hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace

double trace_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  if (m.rows() == m.cols()) {
    // The Hermitian route is certified when the symmetrization error bound
    // d * max|m - m^dag| stays below both the working tolerances and the
    // relative scale; differences at the numerical noise floor land here.
    const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (asym * static_cast<double>(m.rows()) <= 1e-13 ||
        asym <= 1e-12 * scale) {
      return sum_abs_hermitian_eigenvalues((m + m.adjoint()) / 2.0);
    }
  }
  // Singular values via the Hermitian embedding [[0, X], [X^dag, 0]]: its
  // spectrum is {+s_i, -s_i}, so half the absolute eigenvalue sum is ||X||_1.
  const auto r = m.rows();
  const auto c = m.cols();
  Matrix embed = Matrix::Zero(r + c, r + c);
  embed.topRightCorner(r, c) = m;
  embed.bottomLeftCorner(c, r) = m.adjoint();
  return sum_abs_hermitian_eigenvalues(embed) / 2.0;
}

double trace_norm(const Operator& op) { return trace_norm(op.mat); }

EigResult eig_hermitian(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw ShapeError("eig_hermitian requires a square matrix");
  }
  const double dev = m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > kHermitianTol) {
    throw NumericError("matrix deviates from Hermitian by " +
                       std::to_string(dev));
  }
  Matrix sym = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericError("Hermitian eigendecomposition failed");
  }
  return EigResult{solver.eigenvalues(), solver.eigenvectors()};
}

EigResult eig_hermitian(const Operator& op) { return eig_hermitian(op.mat); }

Matrix matrix_power_psd(const Matrix& m, double p) {
  EigResult eig = eig_hermitian(m);
  const double lambda_max = eig.eigenvalues.size() == 0
                                ? 0.0
                                : eig.eigenvalues.cwiseAbs().maxCoeff();
  const double psd_tol = kHermitianTol * std::max(1.0, lambda_max);
  const double cutoff = kSupportCutoff * lambda_max;
  Eigen::VectorXd powered(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double lam = eig.eigenvalues(i);
    if (lam < -psd_tol) {
      throw NumericError("matrix_power_psd: eigenvalue " + std::to_string(lam) +
                         " is negative beyond tolerance");
    }
    if (lam <= cutoff) {
      powered(i) = 0.0;  // zero on the complement of the support
    } else {
      powered(i) = std::pow(lam, p);
    }
  }
  return eig.eigenvectors * powered.asDiagonal() * eig.eigenvectors.adjoint();
}

Operator matrix_power_psd(const Operator& op, double p) {
  return Operator(op.layout, matrix_power_psd(op.mat, p));
}

Operator conjugate_apply(const Operator& x, const Operator& sigma) {
  if (x.dim() != sigma.dim()) {
    throw ShapeError("conjugate_apply: operator dimensions " +
                     std::to_string(x.dim()) + " and " +
                     std::to_string(sigma.dim()) + " differ");
  }
  return Operator(x.layout, x.mat * sigma.mat * x.mat.adjoint());
}

Operator conjugate_apply(const Matrix& x, const SubsystemLayout& out_layout,
                         const Operator& sigma) {
  if (x.cols() != sigma.dim() || x.rows() != out_layout.total_dim()) {
    throw ShapeError("conjugate_apply: map shape " + std::to_string(x.rows()) +
                     "x" + std::to_string(x.cols()) +
                     " incompatible with input dim " +
                     std::to_string(sigma.dim()) + " and output dim " +
                     std::to_string(out_layout.total_dim()));
  }
  return Operator(out_layout, x * sigma.mat * x.adjoint());
}

namespace {

std::int64_t leading_prefix(const SubsystemLayout& layout, std::int64_t want) {
  std::int64_t prefix = 1;
  for (const auto& f : layout.factors()) {
    if (prefix == want) break;
    prefix *= f.dim;
  }
  if (prefix != want) {
    throw ShapeError("map dimension " + std::to_string(want) +
                     " is not a leading-factor product of the layout");
  }
  return prefix;
}

/// (m (x) 1) x for m of shape (out_dim x in_dim), with x's rows split into
/// in_dim blocks of height `rest`. Sparse maps (at most one nonzero per
/// row, e.g. clock-and-shift unitaries) become block copies; dense maps go
/// through per-column small matrix products, which keeps the data in cache.
Matrix left_mix(const Matrix& m, const Matrix& x, std::int64_t rest) {
  const std::int64_t in_dim = m.cols();
  const std::int64_t out_dim = m.rows();
  std::int64_t nnz = 0;
  for (std::int64_t i = 0; i < out_dim; ++i) {
    for (std::int64_t j = 0; j < in_dim; ++j) {
      if (m(i, j) != Complex(0.0, 0.0)) ++nnz;
    }
  }
  if (nnz <= out_dim) {
    Matrix out = Matrix::Zero(out_dim * rest, x.cols());
    for (std::int64_t i = 0; i < out_dim; ++i) {
      for (std::int64_t j = 0; j < in_dim; ++j) {
        const Complex c = m(i, j);
        if (c != Complex(0.0, 0.0)) {
          out.middleRows(i * rest, rest).noalias() +=
              c * x.middleRows(j * rest, rest);
        }
      }
    }
    return out;
  }
  Matrix out(out_dim * rest, x.cols());
  for (std::int64_t col = 0; col < x.cols(); ++col) {
    Eigen::Map<const Matrix> in(x.col(col).data(), rest, in_dim);
    Eigen::Map<Matrix> dst(out.col(col).data(), rest, out_dim);
    dst.noalias() = in * m.transpose();
  }
  return out;
}

}  // namespace

Operator conjugate_on_leading(const Matrix& v, const Operator& sigma) {
  if (v.rows() != v.cols()) {
    throw ShapeError("conjugate_on_leading requires a square map");
  }
  const std::int64_t dv = leading_prefix(sigma.layout, v.cols());
  const std::int64_t rest = sigma.dim() / dv;
  const Matrix left = left_mix(v, sigma.mat, rest);
  Matrix full = left_mix(v, left.adjoint(), rest).adjoint();
  return Operator(sigma.layout, std::move(full));
}

Operator conjugate_on_leading(const Matrix& m, const Operator& sigma,
                              const SubsystemLayout& out_layout) {
  const std::int64_t in_dim = leading_prefix(sigma.layout, m.cols());
  const std::int64_t out_dim = leading_prefix(out_layout, m.rows());
  const std::int64_t rest = sigma.dim() / in_dim;
  if (out_layout.total_dim() != out_dim * rest) {
    throw ShapeError("conjugate_on_leading: output layout does not match the "
                     "mapped leading factors plus the trailing remainder");
  }
  const Matrix left = left_mix(m, sigma.mat, rest);
  Matrix full = left_mix(m, left.adjoint(), rest).adjoint();
  return Operator(out_layout, std::move(full));
}

Vector apply_on_leading(const Matrix& m, const Vector& v) {
  const std::int64_t in_dim = m.cols();
  if (in_dim == 0 || v.size() % in_dim != 0) {
    throw ShapeError("apply_on_leading: map columns " + std::to_string(in_dim) +
                     " do not divide vector length " + std::to_string(v.size()));
  }
  const std::int64_t rest = v.size() / in_dim;
  // v[a*rest + s] viewed column-major is a (rest x in_dim) matrix.
  Eigen::Map<const Matrix> vin(v.data(), rest, in_dim);
  Matrix vout = vin * m.transpose();  // (rest x out_dim)
  return Eigen::Map<const Vector>(vout.data(), vout.size());
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace qdecon
