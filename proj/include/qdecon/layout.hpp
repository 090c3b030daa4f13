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

#ifndef QDECON_LAYOUT_HPP
#define QDECON_LAYOUT_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qdecon/errors.hpp"

namespace qdecon {

/// One labeled tensor factor of a Hilbert space.
struct Factor {
  std::string label;
  std::int64_t dim = 1;

  bool operator==(const Factor&) const = default;
};

/// Ordered, labeled tensor factorization of a Hilbert space.
///
/// The composite index convention is row-major with the leftmost factor most
/// significant: for factors of dimensions (d0, d1, ..., dk-1) the composite
/// index of digits (i0, i1, ..., ik-1) is ((i0*d1 + i1)*d2 + i2)*...
/// All multipartite operations in the library share this convention.
class SubsystemLayout {
 public:
  /// Rank-0 layout (total dimension 1).
  SubsystemLayout() = default;

  /// Validates label uniqueness and dims >= 1; computes total_dim.
  explicit SubsystemLayout(std::vector<Factor> factors);

  static SubsystemLayout single(std::string label, std::int64_t dim);

  const std::vector<Factor>& factors() const { return factors_; }
  std::int64_t total_dim() const { return total_dim_; }
  std::size_t size() const { return factors_.size(); }

  bool has_label(std::string_view label) const;
  /// Position of `label`; throws LayoutError if absent.
  std::size_t index_of(std::string_view label) const;
  std::int64_t dim_of(std::string_view label) const;

  std::vector<std::string> labels() const;

  /// Row-major strides, one per factor (rightmost factor has stride 1).
  std::vector<std::int64_t> strides() const;

  /// Concatenation; throws LayoutError on a label collision.
  SubsystemLayout concat(const SubsystemLayout& other) const;

  /// Sub-layout of the given labels, kept in their original relative order.
  /// Throws LayoutError on unknown labels.
  SubsystemLayout sublayout(const std::vector<std::string>& keep) const;

  bool operator==(const SubsystemLayout&) const = default;

 private:
  std::vector<Factor> factors_;
  std::int64_t total_dim_ = 1;
};

/// Decomposes a composite index into per-factor digits for the given dims.
std::vector<std::int64_t> decompose_index(std::int64_t index,
                                          const std::vector<std::int64_t>& dims);

/// Recomposes per-factor digits into a composite index.
std::int64_t compose_index(const std::vector<std::int64_t>& digits,
                           const std::vector<std::int64_t>& dims);

}  // namespace qdecon

#endif  // QDECON_LAYOUT_HPP
