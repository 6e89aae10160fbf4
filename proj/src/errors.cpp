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

#include "rsapa/errors.hpp"

#include <sstream>

namespace rsapa {

namespace {

std::string divergence_message(double step_size, int iteration) {
  std::ostringstream os;
  os << "power allocation diverged at iteration " << iteration << " with step size mu=" << step_size;
  return os.str();
}

}  // namespace

DivergenceError::DivergenceError(double step_size, int iteration)
    : NumericalError(divergence_message(step_size, iteration)), step_size_(step_size), iteration_(iteration) {}

}  // namespace rsapa
