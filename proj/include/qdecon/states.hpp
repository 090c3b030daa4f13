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

#ifndef QDECON_STATES_HPP
#define QDECON_STATES_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "qdecon/tensor.hpp"

namespace qdecon {

/// Resource caps. Dense density matrices are limited to 4096 x 4096 and
/// pure-state vectors to 2^20 amplitudes; requests beyond that raise
/// CapacityError rather than truncating.
inline constexpr std::int64_t kMaxDensityDim = 4096;
inline constexpr std::int64_t kMaxPureDim = std::int64_t(1) << 20;

/// Density operator: Hermitian within 1e-10, eigenvalues >= -1e-10,
/// trace within 1e-10 of 1. Validated at construction.
class DensityOperator {
 public:
  /// Empty placeholder (rank-0 layout, no entries); fill by assignment.
  DensityOperator() = default;

  explicit DensityOperator(Operator op);
  DensityOperator(SubsystemLayout layout, Matrix mat);

  /// Skips the O(d^3) eigenvalue validation. Only for construction paths
  /// where validity is preserved algebraically (tensor powers, unitary
  /// conjugation, pure-state marginals).
  static DensityOperator unchecked(Operator op);

  const Operator& op() const { return op_; }
  const SubsystemLayout& layout() const { return op_.layout; }
  const Matrix& mat() const { return op_.mat; }
  std::int64_t dim() const { return op_.dim(); }

 private:
  Operator op_;
};

/// Pure state: amplitude vector over a layout, unit norm within 1e-10.
class PureState {
 public:
  PureState(SubsystemLayout layout, Vector amplitudes);

  const SubsystemLayout& layout() const { return layout_; }
  const Vector& amplitudes() const { return amplitudes_; }
  std::int64_t dim() const { return layout_.total_dim(); }

  /// Rank-1 density operator |psi><psi| (subject to the density cap).
  DensityOperator to_density() const;

 private:
  SubsystemLayout layout_;
  Vector amplitudes_;
};

/// Identity / total_dim.
DensityOperator maximally_mixed(const SubsystemLayout& layout);

/// Minimal purification: appends a factor `env_label` of dimension equal to
/// the numerical rank of rho (eigenvalues above the support cutoff). Tracing
/// the new factor out recovers rho within 1e-9 in trace norm.
PureState purify(const DensityOperator& rho, const std::string& env_label);

/// n-fold tensor power with the copies of each original factor regrouped to
/// be contiguous and merged into one composite factor. A factor labeled "A"
/// of dimension d becomes "A^n" of dimension d^n; factor order is preserved.
DensityOperator n_copies_grouped(const DensityOperator& rho, int n);
PureState n_copies_grouped(const PureState& psi, int n);

/// Labels of `rho`'s layout after n-copy grouping ("A" -> "A^n").
std::vector<std::string> grouped_labels(const SubsystemLayout& layout, int n);

/// Deterministic random density operator of the requested numerical rank:
/// the system marginal of a seeded Gaussian pure state on system (x) ancilla
/// of dimension `rank`.
DensityOperator random_density(const SubsystemLayout& layout, std::int64_t rank,
                               std::uint64_t seed);

/// Seeded Gaussian pure state (uniform on the sphere).
PureState random_pure(const SubsystemLayout& layout, std::uint64_t seed);

/// Tensor product of pure states; labels must be disjoint.
PureState kron(const PureState& a, const PureState& b);

/// Factor permutation of a pure state (amplitude re-indexing, bit-exact
/// under composition with the inverse).
PureState permute_subsystems(const PureState& psi,
                             const std::vector<std::string>& new_order);

/// Marginal on the kept labels, computed without forming |psi><psi|.
DensityOperator marginal(const PureState& psi,
                         const std::vector<std::string>& keep);

/// Amplitudes reshaped to a (front x rest) matrix after permuting the given
/// labels to the front (row index runs over the front labels).
Matrix as_matrix(const PureState& psi, const std::vector<std::string>& front);

/// --- Serialization -------------------------------------------------------
///
/// Text format, exact round-trip via hexadecimal float encoding:
///
///   qdecon-state v1
///   kind density            (or: kind pure)
///   layout A:2 B:2 R:2
///   entries 64              (row-major re,im pairs; pure states list
///   0x1p-1,0x0p+0            total_dim amplitudes)
///   ...

void save_state(std::ostream& out, const DensityOperator& rho);
void save_state(std::ostream& out, const PureState& psi);

using StateVariant = std::variant<DensityOperator, PureState>;
StateVariant load_state(std::istream& in);

/// Loads either kind and returns a density operator (pure states are
/// converted via to_density).
DensityOperator load_density(std::istream& in);

}  // namespace qdecon

#endif  // QDECON_STATES_HPP
