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

#include "rsapa/complexity.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "rsapa/alloc.hpp"
#include "rsapa/errors.hpp"
#include "rsapa/objective.hpp"
#include "rsapa/precoders.hpp"
#include "rsapa/rng.hpp"

namespace rsapa {

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::apa: return "RS-APA";
    case Algorithm::apar: return "RS-APA-R";
    case Algorithm::es_sdma: return "SDMA-ES";
    case Algorithm::es_rs: return "RS-ES";
    case Algorithm::full_grid: return "RS-ES-full";
  }
  return "unknown";
}

namespace {

std::uint64_t checked_n(int n) {
  if (n < 1) throw DomainError("flop model: n must be at least 1");
  return static_cast<std::uint64_t>(n);
}

}  // namespace

std::uint64_t flops_apa(int n) {
  const std::uint64_t x = checked_n(n);
  return (41 * x * x * x + 38 * x * x + 5 * x + 8) / 2;
}

std::uint64_t flops_apar(int n) {
  const std::uint64_t x = checked_n(n);
  return (41 * x * x * x + 38 * x * x + 19 * x + 12) / 2;
}

std::uint64_t dot_flops(int n) { return 8 * checked_n(n) - 2; }
std::uint64_t norm_flops(int n) { return 7 * checked_n(n) - 2; }

std::uint64_t grid_points(double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw DomainError("grid_points: step must lie in (0, 1]");
  return static_cast<std::uint64_t>(std::floor(1.0 / grid_step + 1e-9)) + 1;
}

FlopReport flop_report(Algorithm algorithm, int n, int iterations, double grid_step) {
  const double x = static_cast<double>(checked_n(n));
  FlopReport r;
  r.algorithm = algorithm;
  switch (algorithm) {
    case Algorithm::apa:
    case Algorithm::apar:
      if (iterations < 1) throw DomainError("flop_report: iterations must be at least 1");
      r.flops_per_iteration = static_cast<double>(algorithm == Algorithm::apa ? flops_apa(n) : flops_apar(n));
      r.iterations = static_cast<std::uint64_t>(iterations);
      r.big_o = "O(I_a N_t (M+1)^2)";
      break;
    case Algorithm::es_sdma: {
      const auto io = grid_points(grid_step);
      r.iterations = io;
      r.flops_per_iteration = x * static_cast<double>(io) * x * x * x;
      r.big_o = "O(N_t I_o^2 M^3)";
      break;
    }
    case Algorithm::es_rs: {
      const auto io = grid_points(grid_step);
      r.iterations = io;
      r.flops_per_iteration = x * static_cast<double>(io) * std::pow(x + 1.0, 3);
      r.big_o = "O(N_t I_o^2 (M+1)^3)";
      break;
    }
    case Algorithm::full_grid:
      r.iterations = full_grid_candidate_count(n, grid_step);
      r.flops_per_iteration = x * std::pow(x + 1.0, 3);
      r.big_o = "O(N_t C(1/step + M, M) (M+1)^3)";
      break;
  }
  r.total = r.flops_per_iteration * static_cast<double>(r.iterations);
  return r;
}

std::vector<OrderRow> big_o_table() {
  return {
      {"SDMA-ES", "O(N_t I_o^2 M^3)"},     {"WMMSE", "O(I_w N_t M^3)"},
      {"RS-ES", "O(N_t I_o^2 (M+1)^3)"},   {"RS-APA", "O(I_a N_t (M+1)^2)"},
      {"RS-APA-R", "O(I_a N_t (M+1)^2)"},  {"CF", "O(N_t^3)"},
  };
}

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double median_seconds(int samples, int batch, F&& f) {
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    const auto start = Clock::now();
    for (int b = 0; b < batch; ++b) f();
    const std::chrono::duration<double> d = Clock::now() - start;
    t.push_back(d.count() / batch);
  }
  std::nth_element(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(t.size() / 2), t.end());
  return t[t.size() / 2];
}

}  // namespace

IterationTiming measure_iteration_cost(int n, int samples, std::uint64_t seed) {
  if (n < 1) throw DomainError("measure_iteration_cost: n must be at least 1");
  if (samples < 1) throw DomainError("measure_iteration_cost: samples must be at least 1");
  Rng rng(seed, Stream::estimate, 0);
  const CMatrix h = rng.complex_normal_matrix(n, n, 1.0);
  const PrecoderSet p = make_precoders(PrecoderKind::mf, h, 1.0, 1.0);
  const double err_var = 0.1;
  const double mu = 1e-3;
  const int batch = std::max(1, 4096 / (n * n));

  PowerVector a(n);
  volatile double sink = 0.0;

  IterationTiming out;
  out.n = n;
  out.samples = samples;
  out.first_iteration = median_seconds(samples, batch, [&] {
    const CouplingTable ct = build_coupling(h, p, ChannelSource::estimate);
    const RVector g = grad_apar(a, ct, err_var);
    a.coeffs -= mu * g;
    sink = sink + a.coeffs(0);
  });

  const CouplingTable cached = build_coupling(h, p, ChannelSource::estimate);
  out.cached_iteration = median_seconds(samples, batch * 16, [&] {
    const RVector g = grad_apar(a, cached, err_var);
    a.coeffs -= mu * g;
    sink = sink + a.coeffs(0);
  });
  return out;
}

}  // namespace rsapa
