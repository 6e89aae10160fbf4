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

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "rsapa/errors.hpp"
#include "rsapa/kernels.hpp"

namespace rsapa::kernels {

namespace {

constexpr KernelTable kScalar{&scalar::dot, &scalar::sq_norm, &scalar::pairwise_cross, &scalar::weighted_power};
#if defined(RSAPA_HAVE_AVX2)
constexpr KernelTable kAvx2{&avx2::dot, &avx2::sq_norm, &avx2::pairwise_cross, &avx2::weighted_power};
#endif

// -2: environment not read yet, -1: no override, otherwise static_cast<int>(Isa).
std::atomic<int> g_override{-2};

bool detect_avx2() {
#if defined(RSAPA_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

int env_override() {
  const char* env = std::getenv("RSAPA_ISA");
  if (env == nullptr) return -1;
  const std::string_view v(env);
  if (v == "scalar") return static_cast<int>(Isa::scalar);
  if (v == "avx2") return static_cast<int>(Isa::avx2);
  return -1;
}

int current_override() {
  int o = g_override.load(std::memory_order_acquire);
  if (o == -2) {
    int expected = -2;
    g_override.compare_exchange_strong(expected, env_override(), std::memory_order_acq_rel);
    o = g_override.load(std::memory_order_acquire);
  }
  return o;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
  static const bool available = detect_avx2();
  return available;
}

Isa active_isa() {
  const int o = current_override();
  if (o == static_cast<int>(Isa::scalar)) return Isa::scalar;
  return avx2_available() ? Isa::avx2 : Isa::scalar;
}

void set_isa_override(Isa isa) { g_override.store(static_cast<int>(isa), std::memory_order_release); }

void clear_isa_override() { g_override.store(-1, std::memory_order_release); }

const KernelTable& table(Isa isa) {
#if defined(RSAPA_HAVE_AVX2)
  if (isa == Isa::avx2 && avx2_available()) return kAvx2;
#else
  (void)isa;
#endif
  return kScalar;
}

const KernelTable& active() { return table(active_isa()); }

CMatrix products(const CMatrix& rows_transposed, const CMatrix& cols) {
  if (rows_transposed.rows() != cols.rows()) throw DomainError("kernels::products: inner dimensions differ");
  const auto n = static_cast<std::size_t>(cols.rows());
  const KernelTable& k = active();
  CMatrix out(rows_transposed.cols(), cols.cols());
  for (Eigen::Index q = 0; q < cols.cols(); ++q) {
    for (Eigen::Index i = 0; i < rows_transposed.cols(); ++i) {
      out(i, q) = k.dot(rows_transposed.col(i).data(), cols.col(q).data(), n);
    }
  }
  return out;
}

}  // namespace rsapa::kernels
