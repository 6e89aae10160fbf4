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

#include "rsapa/rng.hpp"

#include <cmath>

namespace rsapa {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index,
                          std::uint64_t sub_index) noexcept {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = splitmix64(h ^ index);
  return splitmix64(h ^ (sub_index * 0xd1b54a32d192ed03ULL));
}

cplx Rng::complex_normal(double variance) {
  const double scale = std::sqrt(variance / 2.0);
  const double re = normal();
  const double im = normal();
  return {scale * re, scale * im};
}

CMatrix Rng::complex_normal_matrix(Eigen::Index rows, Eigen::Index cols, double variance) {
  CMatrix m(rows, cols);
  // Row-major fill order so a row's entries come from consecutive draws.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = complex_normal(variance);
  }
  return m;
}

CVector Rng::complex_normal_vector(Eigen::Index size, double variance) {
  CVector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = complex_normal(variance);
  return v;
}

}  // namespace rsapa
