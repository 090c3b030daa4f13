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

#ifndef QDECON_UNITARIES_HPP
#define QDECON_UNITARIES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qdecon/states.hpp"
#include "qdecon/tensor.hpp"

namespace qdecon {

/// Haar-distributed unitary via QR of a complex Gaussian matrix with the
/// R-diagonal phase correction. Deterministic per seed.
Matrix haar_unitary_matrix(std::int64_t dim, std::uint64_t seed);
Operator haar_unitary(const SubsystemLayout& layout, std::uint64_t seed);

/// The d^2 Heisenberg-Weyl (clock-and-shift) unitaries V_(a,b) = X^a Z^b in
/// row-major (a, b) order, with X the cyclic shift and Z = diag(1, w, ...,
/// w^{d-1}), w = exp(2 pi i / d). Member (0,0) is always the identity.
/// d = 1 yields the trivial single-member set.
struct HwSet {
  std::int64_t d = 0;
  std::vector<Matrix> unitaries;
};

HwSet heisenberg_weyl(std::int64_t d);

/// Full-rank partial isometry w mapping the source space onto the (smaller
/// or equal) target space: w w^dag = identity on the target within 1e-10.
/// Carries the dimension-rescaled conjugation channel
///   sigma -> (dim_source / dim_target) (w (x) 1) sigma (w (x) 1)^dag.
class PartialIsometry {
 public:
  PartialIsometry(Matrix w, SubsystemLayout source, SubsystemLayout target);

  const Matrix& w() const { return w_; }
  const SubsystemLayout& source() const { return source_; }
  const SubsystemLayout& target() const { return target_; }
  std::int64_t dim_source() const { return source_.total_dim(); }
  std::int64_t dim_target() const { return target_.total_dim(); }

  /// The source-side density w^dag pi_target w (image of the maximally
  /// mixed target state under the adjoint embedding).
  Operator embedded_mixed() const;

 private:
  Matrix w_;
  SubsystemLayout source_;
  SubsystemLayout target_;
};

/// Rows of a seeded Haar unitary (generic position, avoids accidental
/// alignment with test states).
PartialIsometry make_partial_isometry(const SubsystemLayout& source,
                                      const SubsystemLayout& target,
                                      std::uint64_t seed);
/// First-basis-rows variant for reproducible toy cases.
PartialIsometry canonical_partial_isometry(const SubsystemLayout& source,
                                           const SubsystemLayout& target);

/// Applies the rescaled conjugation channel to sigma, whose leading factors
/// must match the isometry's source layout; remaining factors ride along.
Operator apply_channel(const PartialIsometry& iso, const Operator& sigma);

/// Uniform average of conjugations by the first m Heisenberg-Weyl members
/// (row-major order), acting as V_i (x) 1 on sigma's leading factor.
Operator twirl(const HwSet& hw, std::int64_t m, const Operator& sigma);

/// Embeds a unitary v on the target space into the source space as
///   w^dag v w + (1 - w^dag w).
/// The result is unitary and satisfies (result) w^dag = w^dag v; that
/// intertwining identity is asserted at construction.
Operator embed_unitary(const PartialIsometry& iso, const Matrix& v_target);

struct UhlmannResult {
  Matrix unitary;  // on the act_on subspace
  double overlap;  // achieved |<target| (V (x) 1) |source>| = nuclear norm
};

/// Local unitary on the act_on factors maximizing the overlap with the
/// target: the polar unitary of M_target M_source^dag from its SVD, with the
/// global phase fixed by making the largest-magnitude entry real positive.
/// Null directions (rank-deficient cross matrix) are completed from the
/// SVD's orthonormal complements, deterministically; for a vanishing cross
/// matrix the result is the identity.
UhlmannResult uhlmann_unitary(const PureState& target, const PureState& source,
                              const std::vector<std::string>& act_on);

/// Applies a unitary on the given factors (u (x) 1 after permuting act_on to
/// the front), returning a state on the original layout.
PureState apply_on_subsystems(const Matrix& u,
                              const std::vector<std::string>& act_on,
                              const PureState& psi);

/// Trace distance || |a><a| - |b><b| ||_1 evaluated by diagonalizing the
/// difference in the 2-dimensional span of the two vectors.
double pure_trace_distance(const PureState& a, const PureState& b);

}  // namespace qdecon

#endif  // QDECON_UNITARIES_HPP
