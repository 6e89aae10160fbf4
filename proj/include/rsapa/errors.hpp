// Copyright (c) 2026 The rsapa Authors
// SPDX-License-Identifier: Apache-2.0
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

#include <stdexcept>
#include <string>

namespace rsapa {

// Invalid scenario or experiment configuration (CLI exit code 1).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside an operation's domain: bad dimensions, negative variance, ...
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Base for numerical failures (CLI exit code 2).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegeneracyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivergenceError : public NumericalError {
 public:
  DivergenceError(double step_size, int iteration);
  double step_size() const noexcept { return step_size_; }
  int iteration() const noexcept { return iteration_; }

 private:
  double step_size_;
  int iteration_;
};

// Output could not be written (CLI exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rsapa
