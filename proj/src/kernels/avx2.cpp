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

#include <immintrin.h>

#include "rsapa/kernels.hpp"

// Compiled with -mavx2 -mfma; only reached when CPUID reports both.
namespace rsapa::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline const double* raw(const cplx* z) { return reinterpret_cast<const double*>(z); }

}  // namespace

cplx dot(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = raw(a);
  const double* pb = raw(b);
  // prod lanes: (ar*br, ai*bi), cross lanes: (ar*bi, ai*br) per complex pair.
  __m256d prod = _mm256_setzero_pd();
  __m256d cross = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    prod = _mm256_fmadd_pd(va, vb, prod);
    cross = _mm256_fmadd_pd(va, _mm256_permute_pd(vb, 0b0101), cross);
  }
  alignas(32) double p[4];
  alignas(32) double c[4];
  _mm256_store_pd(p, prod);
  _mm256_store_pd(c, cross);
  double re = (p[0] - p[1]) + (p[2] - p[3]);
  double im = (c[0] + c[1]) + (c[2] + c[3]);
  for (; i < n; ++i) {
    re += a[i].real() * b[i].real() - a[i].imag() * b[i].imag();
    im += a[i].real() * b[i].imag() + a[i].imag() * b[i].real();
  }
  return {re, im};
}

double sq_norm(const cplx* z, std::size_t n) {
  const double* pz = raw(z);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(pz + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
  return s;
}

double pairwise_cross(const cplx* z, std::size_t n) {
  const double* pz = raw(z);
  double total = 0.0;
  for (std::size_t q = 0; q + 1 < n; ++q) {
    const __m256d zq = _mm256_setr_pd(z[q].real(), z[q].imag(), z[q].real(), z[q].imag());
    __m256d acc = _mm256_setzero_pd();
    std::size_t r = q + 1;
    for (; r + 2 <= n; r += 2) acc = _mm256_fmadd_pd(zq, _mm256_loadu_pd(pz + 2 * r), acc);
    double s = hsum(acc);
    for (; r < n; ++r) s += z[q].real() * z[r].real() + z[q].imag() * z[r].imag();
    total += s;
  }
  return total;
}

double weighted_power(const cplx* z, const double* w, std::size_t n) {
  const double* pz = raw(z);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d v = _mm256_loadu_pd(pz + 2 * i);
    const __m128d w2 = _mm_loadu_pd(w + i);
    // (w0, w0, w1, w1)
    const __m256d ww = _mm256_permute4x64_pd(_mm256_castpd128_pd256(w2), 0x50);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), ww, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * (z[i].real() * z[i].real() + z[i].imag() * z[i].imag());
  return s;
}

}  // namespace rsapa::kernels::avx2
