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

#ifndef QDECON_ERRORS_HPP
#define QDECON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qdecon {

/// Base class for all qdecon errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Label collisions, unknown labels, invalid permutations.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// Matrix/vector dimensions incompatible with the requested operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Input violates a numerical precondition (not Hermitian, not PSD, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Requested object exceeds the configured resource caps.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or state file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Iterative minimizer failed to converge. Carries the best value seen and
/// the final step size so callers can decide whether the result is usable.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& msg, double best_value,
                      double final_step)
      : Error(msg), best_value_(best_value), final_step_(final_step) {}

  double best_value() const { return best_value_; }
  double final_step() const { return final_step_; }

 private:
  double best_value_;
  double final_step_;
};

}  // namespace qdecon

#endif  // QDECON_ERRORS_HPP
