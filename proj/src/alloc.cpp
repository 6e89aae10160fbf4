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

#include "rsapa/alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rsapa/errors.hpp"
#include "rsapa/rng.hpp"

namespace rsapa {

namespace {

constexpr double kGridEps = 1e-9;

AllocatorRun run_recursion(const CouplingTable& ct, double err_var, double noise_var, const AllocatorOptions& opts,
                           AllocMode mode) {
  if (opts.iterations < 1) throw DomainError("allocator: iterations must be at least 1");
  if (opts.project && !(opts.total_power > 0.0)) throw DomainError("allocator: total power must be positive");
  const int m = ct.streams();
  const StepBounds bounds = step_bounds(ct, mode, err_var);

  AllocatorRun run;
  run.bound_used = bounds.mu_max;
  if (opts.step_size) {
    if (!(*opts.step_size > 0.0)) throw DomainError("allocator: step size must be positive");
    run.step_size = *opts.step_size;
  } else {
    run.step_size = std::isfinite(bounds.mu_max) ? opts.step_fraction * bounds.mu_max : 0.0;
  }

  PowerVector a = opts.start.value_or(PowerVector(m));
  if (a.streams() != m) throw DomainError("allocator: start vector has the wrong length");
  const double effective_err = mode == AllocMode::robust ? err_var : 0.0;
  auto objective = [&](const PowerVector& v) { return mse_apar(v, ct, effective_err, noise_var); };

  run.trajectory.reserve(static_cast<std::size_t>(opts.iterations));
  run.mse_history.reserve(static_cast<std::size_t>(opts.iterations));
  run.trajectory.push_back(a);
  run.mse_history.push_back(objective(a));

  double last_step = std::numeric_limits<double>::infinity();
  for (int n = 2; n <= opts.iterations; ++n) {
    const RVector g = grad_apar(a, ct, effective_err);
    const RVector previous = a.coeffs;
    a.coeffs -= run.step_size * g;
    if (!a.coeffs.allFinite() || a.coeffs.cwiseAbs().maxCoeff() > opts.divergence_limit) {
      throw DivergenceError(run.step_size, n);
    }
    if (opts.project) {
      a.coeffs = a.coeffs.cwiseMax(0.0);
      scale_to_power(a, opts.total_power);
    }
    last_step = (a.coeffs - previous).cwiseAbs().maxCoeff();
    run.trajectory.push_back(a);
    run.mse_history.push_back(objective(a));
  }
  run.iterations = static_cast<int>(run.trajectory.size());
  run.converged = last_step <= opts.convergence_tolerance * std::max(1.0, a.coeffs.norm());
  return run;
}

}  // namespace

StepBounds step_bounds(const CouplingTable& ct, AllocMode mode, double err_var) {
  if (!(err_var >= 0.0)) throw DomainError("step_bounds: err_var must be nonnegative");
  const int m = ct.streams();
  const double md = m;
  const double ev = mode == AllocMode::robust ? err_var : 0.0;

  StepBounds b;
  b.lambda_private.resize(m);
  b.quoted_lambda_private.resize(m);
  for (int j = 0; j < m; ++j) {
    const double base = ct.private_energy(j) + ct.cross_private(j);
    b.lambda_private(j) = base + md * ev * ct.private_norm_sq(j);
    b.quoted_lambda_private(j) = base + ev * ct.private_norm_sq(j);
  }
  b.lambda_common = 2.0 * ct.common_energy + ct.cross_common + 2.0 * md * ev * ct.common_norm_sq;
  b.quoted_lambda_common = 2.0 * ct.common_energy - ct.cross_common + ev * ct.common_norm_sq;

  double mu = std::numeric_limits<double>::infinity();
  if (b.lambda_common > 0.0) mu = std::min(mu, 1.0 / b.lambda_common);
  for (int j = 0; j < m; ++j) {
    if (b.lambda_private(j) > 0.0) mu = std::min(mu, 1.0 / (2.0 * b.lambda_private(j)));
  }
  b.mu_max = mu;
  b.unstable_geometry = !(b.lambda_common > 0.0) || !(b.quoted_lambda_common > 0.0) ||
                        !(b.lambda_private.minCoeff() > 0.0) || !(b.quoted_lambda_private.minCoeff() > 0.0);
  return b;
}

AllocatorRun run_apa(const CouplingTable& ct, double noise_var, const AllocatorOptions& opts) {
  return run_recursion(ct, 0.0, noise_var, opts, AllocMode::plain);
}

AllocatorRun run_apar(const CouplingTable& ct, double err_var, double noise_var, const AllocatorOptions& opts) {
  if (!(err_var >= 0.0)) throw DomainError("run_apar: err_var must be nonnegative");
  return run_recursion(ct, err_var, noise_var, opts, AllocMode::robust);
}

void scale_to_power(PowerVector& a, double total_power) {
  const double current = a.total_power();
  if (current > 0.0 && current != total_power) a.coeffs *= std::sqrt(total_power / current);
}

PowerVector uniform_allocation(int streams, double total_power, double delta) {
  if (streams < 1) throw DomainError("uniform_allocation: need at least one stream");
  if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("uniform_allocation: delta must lie in [0, 1]");
  if (!(total_power > 0.0)) throw DomainError("uniform_allocation: total power must be positive");
  PowerVector a(streams);
  a.common() = std::sqrt(delta * total_power);
  const double each = std::sqrt((1.0 - delta) * total_power / streams);
  for (int j = 0; j < streams; ++j) a.stream(j) = each;
  return a;
}

PowerVector uniform_allocation(const SystemConfig& cfg, double delta) {
  return uniform_allocation(cfg.streams(), cfg.total_power, delta);
}

PowerVector random_allocation(int streams, double total_power, std::uint64_t seed) {
  if (streams < 1) throw DomainError("random_allocation: need at least one stream");
  if (!(total_power > 0.0)) throw DomainError("random_allocation: total power must be positive");
  Rng rng(seed, Stream::allocation, 0);
  PowerVector a(streams);
  do {
    for (Eigen::Index i = 0; i < a.coeffs.size(); ++i) a.coeffs(i) = rng.uniform();
  } while (a.total_power() == 0.0);
  scale_to_power(a, total_power);
  return a;
}

PowerVector random_allocation(const SystemConfig& cfg, std::uint64_t seed) {
  return random_allocation(cfg.streams(), cfg.total_power, seed);
}

DeltaSearchResult grid_search_delta(int streams, double total_power, PrivateRule rule, double grid_step,
                                    const Metric& metric, Goal goal, std::uint64_t seed) {
  if (!(grid_step > 0.0 && grid_step <= 0.5)) throw DomainError("grid_search_delta: grid step must lie in (0, 0.5]");
  if (streams < 1) throw DomainError("grid_search_delta: need at least one stream");

  RVector split = RVector::Constant(streams, 1.0 / streams);
  if (rule == PrivateRule::random) {
    Rng rng(seed, Stream::allocation, 1);
    do {
      for (int j = 0; j < streams; ++j) split(j) = rng.uniform();
    } while (split.sum() == 0.0);
    split /= split.sum();
  }

  std::vector<double> deltas;
  const auto steps = static_cast<long>(std::floor(1.0 / grid_step + kGridEps));
  for (long k = 0; k <= steps; ++k) deltas.push_back(std::min(1.0, static_cast<double>(k) * grid_step));
  if (deltas.back() < 1.0 - kGridEps) deltas.push_back(1.0);

  DeltaSearchResult best;
  bool have = false;
  for (const double delta : deltas) {
    PowerVector a(streams);
    a.common() = std::sqrt(delta * total_power);
    for (int j = 0; j < streams; ++j) a.stream(j) = std::sqrt((1.0 - delta) * total_power * split(j));
    const double value = metric(a);
    const bool better = goal == Goal::maximize ? value > best.value : value < best.value;
    if (!have || better) {
      best.delta = delta;
      best.coeffs = a;
      best.value = value;
      have = true;
    }
  }
  best.evaluated_deltas = std::move(deltas);
  return best;
}

std::uint64_t full_grid_candidate_count(int streams, double grid_step) {
  if (streams < 1) throw DomainError("full grid: need at least one stream");
  if (!(grid_step > 0.0 && grid_step <= 1.0)) throw DomainError("full grid: grid step must lie in (0, 1]");
  const double quanta_d = std::round(1.0 / grid_step);
  if (std::abs(quanta_d * grid_step - 1.0) > kGridEps) throw DomainError("full grid: 1/grid_step must be an integer");
  const auto quanta = static_cast<std::uint64_t>(quanta_d);
  // C(quanta + streams, streams), saturating.
  std::uint64_t count = 1;
  for (std::uint64_t i = 1; i <= static_cast<std::uint64_t>(streams); ++i) {
    const std::uint64_t num = quanta + i;
    if (count > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
    count = count * num / i;
  }
  return count;
}

FullSearchResult grid_search_full(const Metric& metric, int streams, double grid_step, double total_power, Goal goal,
                                  std::uint64_t budget) {
  const std::uint64_t count = full_grid_candidate_count(streams, grid_step);
  if (count > budget) {
    throw ConfigError("full grid search needs " + std::to_string(count) + " candidates, budget is " +
                      std::to_string(budget));
  }
  const int quanta = static_cast<int>(std::round(1.0 / grid_step));
  const int coeffs = streams + 1;

  FullSearchResult best;
  bool have = false;
  std::vector<int> parts(static_cast<std::size_t>(coeffs), 0);
  PowerVector a(streams);

  // Lexicographic over (common, stream 1, ...), common share ascending.
  auto visit = [&](auto&& self, int index, int remaining) -> void {
    if (index == coeffs - 1) {
      parts[static_cast<std::size_t>(index)] = remaining;
      for (int i = 0; i < coeffs; ++i) {
        a.coeffs(i) = std::sqrt(total_power * parts[static_cast<std::size_t>(i)] / quanta);
      }
      const double value = metric(a);
      ++best.candidates;
      const bool better = goal == Goal::maximize ? value > best.value : value < best.value;
      if (!have || better) {
        best.coeffs = a;
        best.value = value;
        have = true;
      }
      return;
    }
    for (int q = 0; q <= remaining; ++q) {
      parts[static_cast<std::size_t>(index)] = q;
      self(self, index + 1, remaining - q);
    }
  };
  visit(visit, 0, quanta);
  return best;
}

}  // namespace rsapa
