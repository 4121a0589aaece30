// Copyright (c) 2026 The pflsim Authors
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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pflsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Gram matrix too ill-conditioned to invert (near-singular configuration).
class RankDeficient : public Error {
 public:
  using Error::Error;
};

class NonFiniteDerivative : public Error {
 public:
  using Error::Error;
};

class UnknownRegion : public Error {
 public:
  using Error::Error;
};

class NonPositiveMass : public Error {
 public:
  using Error::Error;
};

/// The contact direction cannot be moved by the arm (u^T J M^-1 J^T u ~ 0).
class SingularInertia : public Error {
 public:
  using Error::Error;
};

/// The desired-inertia redistribution would need a non-positive gamma.
class DegenerateDirection : public Error {
 public:
  using Error::Error;
};

class NumericalDivergence : public Error {
 public:
  using Error::Error;
};

class EmptyLog : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Malformed model, scenario or data file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Wraps a failure raised inside the simulation loop with the step it happened at.
class SimulationError : public Error {
 public:
  SimulationError(std::size_t step, double time, const std::string& what)
      : Error("step " + std::to_string(step) + " (t=" + std::to_string(time) +
              " s): " + what),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace pflsim
