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

#ifndef QDECON_RANDOM_HPP
#define QDECON_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

#include "qdecon/tensor.hpp"

namespace qdecon {

/// SplitMix64 finalizer; the mixing primitive behind seed derivation.
std::uint64_t mix64(std::uint64_t x);

/// Deterministically derives a child seed from a master seed and a list of
/// indices (grid coordinates, sample number, stream id, ...). Any single
/// derived stream is reproducible in isolation.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> indices);

/// Complex matrix with i.i.d. standard complex Gaussian entries
/// (real and imaginary parts N(0, 1/2) so E|z|^2 = 1).
Matrix ginibre_matrix(std::int64_t rows, std::int64_t cols, std::uint64_t seed);

/// Seeded Gaussian vector normalized to unit Euclidean norm.
Vector random_unit_vector(std::int64_t dim, std::uint64_t seed);

}  // namespace qdecon

#endif  // QDECON_RANDOM_HPP
