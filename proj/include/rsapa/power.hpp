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

#include "rsapa/types.hpp"

namespace rsapa {

// Stream amplitudes ordered [a_c, a_1, ..., a_M]. The common stream's share of
// the budget is a_c^2 / sum(a_i^2).
struct PowerVector {
  RVector coeffs;

  PowerVector() = default;
  explicit PowerVector(int streams) : coeffs(RVector::Zero(streams + 1)) {}
  explicit PowerVector(RVector c) : coeffs(std::move(c)) {}

  int streams() const { return static_cast<int>(coeffs.size()) - 1; }
  double common() const { return coeffs(0); }
  double& common() { return coeffs(0); }
  double stream(int j) const { return coeffs(j + 1); }
  double& stream(int j) { return coeffs(j + 1); }

  double total_power() const { return coeffs.squaredNorm(); }

  // a_c^2 / sum(a_i^2); zero for the all-zero vector.
  double common_fraction() const {
    const double total = total_power();
    return total > 0.0 ? coeffs(0) * coeffs(0) / total : 0.0;
  }
};

}  // namespace rsapa
