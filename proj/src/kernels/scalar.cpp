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

#include "rsapa/kernels.hpp"

namespace rsapa::kernels::scalar {

cplx dot(const cplx* a, const cplx* b, std::size_t n) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

double sq_norm(const cplx* z, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
  return acc;
}

double pairwise_cross(const cplx* z, std::size_t n) {
  double acc = 0.0;
  for (std::size_t q = 0; q + 1 < n; ++q) {
    for (std::size_t r = q + 1; r < n; ++r) {
      acc += z[q].real() * z[r].real() + z[q].imag() * z[r].imag();
    }
  }
  return acc;
}

double weighted_power(const cplx* z, const double* w, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * (z[i].real() * z[i].real() + z[i].imag() * z[i].imag());
  return acc;
}

}  // namespace rsapa::kernels::scalar
