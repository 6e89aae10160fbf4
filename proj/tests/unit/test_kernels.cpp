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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "rsapa/kernels.hpp"
#include "rsapa/rng.hpp"

using namespace rsapa;
namespace k = rsapa::kernels;

namespace {

std::vector<cplx> random_vec(Rng& rng, std::size_t n) {
  std::vector<cplx> v(n);
  for (auto& z : v) z = rng.complex_normal(1.0);
  return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

cplx direct_dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double direct_cross(const std::vector<cplx>& z) {
  double s = 0.0;
  for (std::size_t q = 0; q < z.size(); ++q) {
    for (std::size_t r = q + 1; r < z.size(); ++r) s += (std::conj(z[q]) * z[r]).real();
  }
  return s;
}

}  // namespace

TEST_CASE("scalar kernels match direct loops") {
  Rng rng(1);
  const auto& t = k::table(k::Isa::scalar);
  for (std::size_t n = 0; n < 20; ++n) {
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    std::vector<double> w(n);
    for (auto& x : w) x = rng.uniform();
    CHECK(std::abs(t.dot(a.data(), b.data(), n) - direct_dot(a, b)) < 1e-12);
    double sq = 0.0, wp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sq += std::norm(a[i]);
      wp += w[i] * std::norm(a[i]);
    }
    CHECK(rel(t.sq_norm(a.data(), n), sq) < 1e-13);
    CHECK(rel(t.weighted_power(a.data(), w.data(), n), wp) < 1e-13);
    CHECK(rel(t.pairwise_cross(a.data(), n), direct_cross(a)) < 1e-12);
  }
}

TEST_CASE("pairwise cross identity") {
  Rng rng(2);
  const auto z = random_vec(rng, 9);
  cplx sum = 0.0;
  double energy = 0.0;
  for (const auto& x : z) {
    sum += x;
    energy += std::norm(x);
  }
  CHECK(rel(2.0 * k::active().pairwise_cross(z.data(), z.size()), std::norm(sum) - energy) < 1e-12);
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  if (!k::avx2_available()) {
    MESSAGE("AVX2 not available on this machine; skipping");
    return;
  }
  const auto& s = k::table(k::Isa::scalar);
  const auto& v = k::table(k::Isa::avx2);
  Rng rng(3);
  for (std::size_t n = 0; n < 67; ++n) {
    // Offset by one element so loads are not 32-byte aligned.
    auto a = random_vec(rng, n + 1);
    auto b = random_vec(rng, n + 1);
    std::vector<double> w(n + 1);
    for (auto& x : w) x = rng.uniform();
    const cplx* pa = a.data() + 1;
    const cplx* pb = b.data() + 1;
    const double* pw = w.data() + 1;
    CHECK(std::abs(s.dot(pa, pb, n) - v.dot(pa, pb, n)) < 1e-12 * (1.0 + n));
    CHECK(rel(s.sq_norm(pa, n), v.sq_norm(pa, n)) < 1e-13);
    CHECK(rel(s.weighted_power(pa, pw, n), v.weighted_power(pa, pw, n)) < 1e-13);
    CHECK(rel(s.pairwise_cross(pa, n), v.pairwise_cross(pa, n)) < 1e-12);
  }
}

TEST_CASE("runtime selection and override") {
  k::set_isa_override(k::Isa::scalar);
  CHECK(k::active_isa() == k::Isa::scalar);
  CHECK(&k::active() == &k::table(k::Isa::scalar));
  k::clear_isa_override();
  CHECK(k::active_isa() == (k::avx2_available() ? k::Isa::avx2 : k::Isa::scalar));
  CHECK(k::to_string(k::Isa::avx2) == "avx2");
}

TEST_CASE("products match Eigen's matrix product") {
  Rng rng(4);
  const CMatrix rows = rng.complex_normal_matrix(5, 7, 1.0);
  const CMatrix cols = rng.complex_normal_matrix(7, 3, 1.0);
  const CMatrix out = k::products(rows.transpose(), cols);
  CHECK((out - rows * cols).cwiseAbs().maxCoeff() < 1e-12);
}
