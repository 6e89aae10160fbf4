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

#include <cstddef>
#include <span>
#include <string_view>

#include "rsapa/types.hpp"

// Inner loops behind the coupling table and the SINR evaluation. Each kernel
// has a scalar reference and, on x86-64, an AVX2/FMA variant; the variant is
// picked at runtime from CPUID unless overridden.
namespace rsapa::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

bool avx2_available();

// Best variant the CPU supports, or the override when one is set. The
// RSAPA_ISA environment variable ("scalar" or "avx2") seeds the override.
Isa active_isa();

// Forces a variant (falls back to scalar if AVX2 is unavailable).
void set_isa_override(Isa isa);
void clear_isa_override();

struct KernelTable {
  // sum_i a_i * b_i (no conjugation): a row of H times a precoder column.
  cplx (*dot)(const cplx* a, const cplx* b, std::size_t n);
  // sum_i |z_i|^2
  double (*sq_norm)(const cplx* z, std::size_t n);
  // sum_{q<r} Re{conj(z_q) z_r}
  double (*pairwise_cross)(const cplx* z, std::size_t n);
  // sum_i w_i |z_i|^2
  double (*weighted_power)(const cplx* z, const double* w, std::size_t n);
};

const KernelTable& table(Isa isa);
const KernelTable& active();

namespace scalar {
cplx dot(const cplx* a, const cplx* b, std::size_t n);
double sq_norm(const cplx* z, std::size_t n);
double pairwise_cross(const cplx* z, std::size_t n);
double weighted_power(const cplx* z, const double* w, std::size_t n);
}  // namespace scalar

#if defined(RSAPA_HAVE_AVX2)
namespace avx2 {
cplx dot(const cplx* a, const cplx* b, std::size_t n);
double sq_norm(const cplx* z, std::size_t n);
double pairwise_cross(const cplx* z, std::size_t n);
double weighted_power(const cplx* z, const double* w, std::size_t n);
}  // namespace avx2
#endif

inline cplx dot(std::span<const cplx> a, std::span<const cplx> b) { return active().dot(a.data(), b.data(), a.size()); }
inline double sq_norm(std::span<const cplx> z) { return active().sq_norm(z.data(), z.size()); }
inline double pairwise_cross(std::span<const cplx> z) { return active().pairwise_cross(z.data(), z.size()); }
inline double weighted_power(std::span<const cplx> z, std::span<const double> w) {
  return active().weighted_power(z.data(), w.data(), z.size());
}

// Row i of `rows` times column q of `cols`, for every (i, q). `rows` is passed
// transposed (N_t x M) so that each channel row is contiguous.
CMatrix products(const CMatrix& rows_transposed, const CMatrix& cols);

}  // namespace rsapa::kernels
