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

#include "qdecon/unitaries.hpp"

#include <cmath>
#include <numbers>

#include "qdecon/errors.hpp"
#include "qdecon/random.hpp"

namespace qdecon {

namespace {

constexpr double kUnitaryTol = 1e-10;

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u * u.adjoint() - Matrix::Identity(u.rows(), u.rows()))
             .cwiseAbs()
             .maxCoeff() <= tol;
}

}  // namespace

Matrix haar_unitary_matrix(std::int64_t dim, std::uint64_t seed) {
  if (dim < 1) throw ConfigError("haar_unitary: dimension must be >= 1");
  const Matrix g = ginibre_matrix(dim, dim, seed);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the distribution is exactly Haar.
  for (std::int64_t j = 0; j < dim; ++j) {
    const Complex rjj = r(j, j);
    const double mag = std::abs(rjj);
    q.col(j) *= (mag > 0.0) ? rjj / mag : Complex(1.0, 0.0);
  }
  return q;
}

Operator haar_unitary(const SubsystemLayout& layout, std::uint64_t seed) {
  return Operator(layout, haar_unitary_matrix(layout.total_dim(), seed));
}

HwSet heisenberg_weyl(std::int64_t d) {
  if (d < 1) throw ConfigError("heisenberg_weyl: dimension must be >= 1");
  HwSet set;
  set.d = d;
  set.unitaries.reserve(d * d);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::int64_t a = 0; a < d; ++a) {
    for (std::int64_t b = 0; b < d; ++b) {
      Matrix v = Matrix::Zero(d, d);
      for (std::int64_t k = 0; k < d; ++k) {
        // X^a Z^b |k> = w^{bk} |k+a mod d>
        const double phase = two_pi * static_cast<double>(b * k) / d;
        v((k + a) % d, k) = Complex(std::cos(phase), std::sin(phase));
      }
      set.unitaries.push_back(std::move(v));
    }
  }
  return set;
}

PartialIsometry::PartialIsometry(Matrix w, SubsystemLayout source,
                                 SubsystemLayout target)
    : w_(std::move(w)), source_(std::move(source)), target_(std::move(target)) {
  const std::int64_t da = source_.total_dim();
  const std::int64_t df = target_.total_dim();
  if (df > da) {
    throw ShapeError("partial isometry target dimension " + std::to_string(df) +
                     " exceeds source dimension " + std::to_string(da));
  }
  if (w_.rows() != df || w_.cols() != da) {
    throw ShapeError("partial isometry matrix must be target x source");
  }
  const double dev =
      (w_ * w_.adjoint() - Matrix::Identity(df, df)).cwiseAbs().maxCoeff();
  if (dev > kUnitaryTol) {
    throw NumericError("w w^dag deviates from the identity by " +
                       std::to_string(dev));
  }
}

Operator PartialIsometry::embedded_mixed() const {
  return Operator(source_, w_.adjoint() * w_ / static_cast<double>(dim_target()));
}

PartialIsometry make_partial_isometry(const SubsystemLayout& source,
                                      const SubsystemLayout& target,
                                      std::uint64_t seed) {
  if (target.total_dim() > source.total_dim()) {
    throw ShapeError("make_partial_isometry: target dimension " +
                     std::to_string(target.total_dim()) +
                     " exceeds source dimension " +
                     std::to_string(source.total_dim()));
  }
  const Matrix u = haar_unitary_matrix(source.total_dim(), seed);
  return PartialIsometry(u.topRows(target.total_dim()), source, target);
}

PartialIsometry canonical_partial_isometry(const SubsystemLayout& source,
                                           const SubsystemLayout& target) {
  if (target.total_dim() > source.total_dim()) {
    throw ShapeError("canonical_partial_isometry: target dimension exceeds "
                     "source dimension");
  }
  Matrix w = Matrix::Zero(target.total_dim(), source.total_dim());
  w.leftCols(target.total_dim()) =
      Matrix::Identity(target.total_dim(), target.total_dim());
  return PartialIsometry(std::move(w), source, target);
}

Operator apply_channel(const PartialIsometry& iso, const Operator& sigma) {
  const auto& src_factors = iso.source().factors();
  const auto& sig_factors = sigma.layout.factors();
  if (sig_factors.size() < src_factors.size()) {
    throw ShapeError("apply_channel: sigma has fewer factors than the source");
  }
  for (std::size_t i = 0; i < src_factors.size(); ++i) {
    if (!(sig_factors[i] == src_factors[i])) {
      throw ShapeError("apply_channel: sigma's leading factors do not match "
                       "the isometry source layout");
    }
  }

  std::vector<Factor> rest(sig_factors.begin() + src_factors.size(),
                           sig_factors.end());
  SubsystemLayout out_layout = iso.target().concat(SubsystemLayout(rest));

  const double scale = static_cast<double>(iso.dim_source()) /
                       static_cast<double>(iso.dim_target());
  Operator out = conjugate_on_leading(iso.w(), sigma, out_layout);
  out.mat *= scale;
  return out;
}

Operator twirl(const HwSet& hw, std::int64_t m, const Operator& sigma) {
  if (m < 1 || m > hw.d * hw.d) {
    throw ConfigError("twirl: m = " + std::to_string(m) +
                      " outside [1, " + std::to_string(hw.d * hw.d) + "]");
  }
  if (sigma.layout.size() == 0 || sigma.layout.factors()[0].dim != hw.d) {
    throw ShapeError("twirl: sigma's leading factor must have dimension " +
                     std::to_string(hw.d));
  }
  const std::int64_t d = hw.d;
  const std::int64_t rest = sigma.dim() / d;
  const double two_pi = 2.0 * std::numbers::pi;

  // Member (a, b) acts on the leading-factor blocks as
  //   (V sigma V^dag)[(j+a), (k+a)] = w^{b(j-k)} sigma[j, k],
  // a phase-twisted block permutation; accumulating these directly avoids
  // any matrix products.
  Matrix acc = Matrix::Zero(sigma.dim(), sigma.dim());
  for (std::int64_t i = 0; i < m; ++i) {
    const std::int64_t a = i / d;
    const std::int64_t b = i % d;
    for (std::int64_t j = 0; j < d; ++j) {
      for (std::int64_t k = 0; k < d; ++k) {
        const double angle =
            two_pi * static_cast<double>(b * ((j - k + d) % d)) / d;
        const Complex phase(std::cos(angle), std::sin(angle));
        acc.block(((j + a) % d) * rest, ((k + a) % d) * rest, rest, rest)
            .noalias() += phase * sigma.mat.block(j * rest, k * rest, rest, rest);
      }
    }
  }
  return Operator(sigma.layout, acc / static_cast<double>(m));
}

Operator embed_unitary(const PartialIsometry& iso, const Matrix& v_target) {
  if (v_target.rows() != iso.dim_target() ||
      v_target.cols() != iso.dim_target()) {
    throw ShapeError("embed_unitary: v must act on the target space");
  }
  if (!is_unitary(v_target, kUnitaryTol)) {
    throw NumericError("embed_unitary: v is not unitary within tolerance");
  }
  const Matrix& w = iso.w();
  const std::int64_t da = iso.dim_source();
  Matrix out = w.adjoint() * v_target * w +
               (Matrix::Identity(da, da) - w.adjoint() * w);
  const double dev = (out * w.adjoint() - w.adjoint() * v_target)
                         .cwiseAbs()
                         .maxCoeff();
  if (dev > kUnitaryTol) {
    throw NumericError("embedded unitary violates the intertwining identity "
                       "by " + std::to_string(dev));
  }
  return Operator(iso.source(), std::move(out));
}

UhlmannResult uhlmann_unitary(const PureState& target, const PureState& source,
                              const std::vector<std::string>& act_on) {
  if (!(target.layout() == source.layout())) {
    throw ShapeError("uhlmann_unitary: target and source layouts differ");
  }
  const Matrix mt = as_matrix(target, act_on);
  const Matrix ms = as_matrix(source, act_on);
  const Matrix cross = mt * ms.adjoint();
  const std::int64_t d = cross.rows();

  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double overlap = svd.singularValues().sum();

  Matrix polar;
  if (svd.singularValues().size() == 0 ||
      svd.singularValues().maxCoeff() < 1e-14) {
    polar = Matrix::Identity(d, d);
  } else {
    polar = svd.matrixU() * svd.matrixV().adjoint();
  }

  // Deterministic global phase: largest-magnitude entry made real positive.
  Eigen::Index bi = 0, bj = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double mag = std::abs(polar(i, j));
      if (mag > best) {
        best = mag;
        bi = i;
        bj = j;
      }
    }
  }
  if (best > 0.0) {
    const Complex z = polar(bi, bj);
    polar *= std::conj(z) / std::abs(z);
  }
  return UhlmannResult{std::move(polar), overlap};
}

PureState apply_on_subsystems(const Matrix& u,
                              const std::vector<std::string>& act_on,
                              const PureState& psi) {
  std::int64_t d_act = 1;
  for (const auto& l : act_on) d_act *= psi.layout().dim_of(l);
  if (u.rows() != d_act || u.cols() != d_act) {
    throw ShapeError("apply_on_subsystems: matrix dimension " +
                     std::to_string(u.rows()) +
                     " does not match the act_on dimension " +
                     std::to_string(d_act));
  }
  // Permute act_on to the front, multiply the reshaped amplitudes, restore.
  std::vector<std::string> order = act_on;
  for (const auto& f : psi.layout().factors()) {
    bool acted = false;
    for (const auto& l : act_on) {
      if (l == f.label) acted = true;
    }
    if (!acted) order.push_back(f.label);
  }
  PureState front = permute_subsystems(psi, order);
  const std::int64_t rest = psi.dim() / d_act;

  using RowMajor =
      Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMajor> m(front.amplitudes().data(), d_act, rest);
  RowMajor applied = u * m;
  Vector out_amps = Eigen::Map<const Vector>(applied.data(), psi.dim());

  PureState permuted(front.layout(), std::move(out_amps));
  return permute_subsystems(permuted, psi.layout().labels());
}

double pure_trace_distance(const PureState& a, const PureState& b) {
  if (!(a.layout() == b.layout())) {
    throw ShapeError("pure_trace_distance: layouts differ");
  }
  const Complex g = a.amplitudes().dot(b.amplitudes());  // <a|b>
  Vector resid = b.amplitudes() - g * a.amplitudes();
  const double rn = resid.norm();
  if (rn == 0.0) return 0.0;
  resid /= rn;
  // Components of |a>, |b> in the orthonormal basis {|a>, resid}.
  Eigen::Vector2cd va(1.0, 0.0);
  Eigen::Vector2cd vb(g, rn);
  Eigen::Matrix2cd delta = va * va.adjoint() - vb * vb.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(delta,
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qdecon
