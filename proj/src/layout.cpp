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

#include "qdecon/layout.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "qdecon/errors.hpp"

namespace qdecon {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  if (a != 0 && b > std::numeric_limits<std::int64_t>::max() / a) {
    throw CapacityError("dimension product overflows 64-bit range");
  }
  return a * b;
}

}  // namespace

SubsystemLayout::SubsystemLayout(std::vector<Factor> factors)
    : factors_(std::move(factors)) {
  std::set<std::string> seen;
  for (const auto& f : factors_) {
    if (f.dim < 1) {
      throw LayoutError("factor '" + f.label + "' has dimension " +
                        std::to_string(f.dim) + "; must be >= 1");
    }
    if (!seen.insert(f.label).second) {
      throw LayoutError("duplicate label '" + f.label + "' in layout");
    }
    total_dim_ = checked_mul(total_dim_, f.dim);
  }
}

SubsystemLayout SubsystemLayout::single(std::string label, std::int64_t dim) {
  return SubsystemLayout({Factor{std::move(label), dim}});
}

bool SubsystemLayout::has_label(std::string_view label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

std::size_t SubsystemLayout::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].label == label) return i;
  }
  throw LayoutError("unknown label '" + std::string(label) + "'");
}

std::int64_t SubsystemLayout::dim_of(std::string_view label) const {
  return factors_[index_of(label)].dim;
}

std::vector<std::string> SubsystemLayout::labels() const {
  std::vector<std::string> out;
  out.reserve(factors_.size());
  for (const auto& f : factors_) out.push_back(f.label);
  return out;
}

std::vector<std::int64_t> SubsystemLayout::strides() const {
  std::vector<std::int64_t> out(factors_.size(), 1);
  for (std::size_t i = factors_.size(); i-- > 1;) {
    out[i - 1] = out[i] * factors_[i].dim;
  }
  return out;
}

SubsystemLayout SubsystemLayout::concat(const SubsystemLayout& other) const {
  std::vector<Factor> merged = factors_;
  merged.insert(merged.end(), other.factors_.begin(), other.factors_.end());
  return SubsystemLayout(std::move(merged));  // re-validates labels
}

SubsystemLayout SubsystemLayout::sublayout(
    const std::vector<std::string>& keep) const {
  std::set<std::string> want;
  for (const auto& l : keep) {
    if (!has_label(l)) throw LayoutError("unknown label '" + l + "'");
    if (!want.insert(l).second) {
      throw LayoutError("label '" + l + "' listed twice");
    }
  }
  std::vector<Factor> kept;
  for (const auto& f : factors_) {
    if (want.count(f.label)) kept.push_back(f);
  }
  return SubsystemLayout(std::move(kept));
}

std::vector<std::int64_t> decompose_index(
    std::int64_t index, const std::vector<std::int64_t>& dims) {
  std::vector<std::int64_t> digits(dims.size(), 0);
  for (std::size_t i = dims.size(); i-- > 0;) {
    digits[i] = index % dims[i];
    index /= dims[i];
  }
  return digits;
}

std::int64_t compose_index(const std::vector<std::int64_t>& digits,
                           const std::vector<std::int64_t>& dims) {
  std::int64_t index = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    index = index * dims[i] + digits[i];
  }
  return index;
}

}  // namespace qdecon
