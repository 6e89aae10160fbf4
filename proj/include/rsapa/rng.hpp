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

#include <cstdint>
#include <random>

#include "rsapa/types.hpp"

namespace rsapa {

// Independent random substreams. Every draw in the simulator is keyed by
// (master seed, stream, index, sub-index), so results do not depend on the
// order in which trials are evaluated or on the number of workers.
enum class Stream : std::uint64_t {
  estimate = 1,
  error = 2,
  symbols = 3,
  noise = 4,
  search = 5,
  allocation = 6,
  oracle = 7,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index,
                          std::uint64_t sub_index = 0) noexcept;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t master, Stream stream, std::uint64_t index, std::uint64_t sub_index = 0)
      : engine_(derive_seed(master, stream, index, sub_index)) {}

  double uniform() { return uniform_(engine_); }
  double normal() { return normal_(engine_); }

  // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
  cplx complex_normal(double variance);

  CMatrix complex_normal_matrix(Eigen::Index rows, Eigen::Index cols, double variance);
  CVector complex_normal_vector(Eigen::Index size, double variance);

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rsapa
