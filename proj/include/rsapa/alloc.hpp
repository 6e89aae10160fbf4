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
#include <functional>
#include <optional>
#include <vector>

#include "rsapa/model.hpp"
#include "rsapa/objective.hpp"
#include "rsapa/power.hpp"

namespace rsapa {

enum class AllocMode { plain, robust };

// Step-size limits of the gradient recursions. `lambda_*` come from the
// curvature of the objective actually descended: private coefficient j
// contracts by |1 - 4 mu lambda_j| per step and the common one by
// |1 - 2 mu lambda_c|, so mu_max = min(1/lambda_c, 1/(2 lambda_j)).
// `quoted_lambda_*` are the closed forms
//   lambda_j = sum_l |phi(l,j)|^2 + sum_{q<r} f_{q,r}^(j) (+ sigma_e^2 ||p_j||^2)
//   lambda_c = 2 sum_j |phi(j,c)|^2 - f^(c)              (+ sigma_e^2 ||p_c||^2)
// as commonly quoted, kept for reporting; they are not used to pick mu.
struct StepBounds {
  RVector lambda_private;
  double lambda_common = 0.0;
  double mu_max = 0.0;
  RVector quoted_lambda_private;
  double quoted_lambda_common = 0.0;
  // Some lambda (derived or quoted) is not positive.
  bool unstable_geometry = false;
};

StepBounds step_bounds(const CouplingTable& ct, AllocMode mode, double err_var = 0.0);

struct AllocatorOptions {
  // Fixed step size; when empty, step_fraction * mu_max is used.
  std::optional<double> step_size;
  double step_fraction = 0.5;
  int iterations = 30;
  double total_power = 1.0;
  // Clamp to nonnegative amplitudes and rescale to total_power after every
  // step. Disable to study the raw recursion.
  bool project = true;
  std::optional<PowerVector> start;
  double divergence_limit = 1e6;
  double convergence_tolerance = 1e-9;
};

struct AllocatorRun {
  // trajectory[0] is the start (zero unless overridden).
  std::vector<PowerVector> trajectory;
  std::vector<double> mse_history;
  double step_size = 0.0;
  int iterations = 0;
  bool converged = false;
  double bound_used = 0.0;

  const PowerVector& final() const { return trajectory.back(); }
};

AllocatorRun run_apa(const CouplingTable& ct, double noise_var, const AllocatorOptions& opts);
AllocatorRun run_apar(const CouplingTable& ct, double err_var, double noise_var, const AllocatorOptions& opts);

// Scales a in place so that sum(a_i^2) = total_power. No-op on the zero vector.
void scale_to_power(PowerVector& a, double total_power);

// a_c = sqrt(delta E_tr), a_i = sqrt((1 - delta) E_tr / M).
PowerVector uniform_allocation(int streams, double total_power, double delta);
PowerVector uniform_allocation(const SystemConfig& cfg, double delta);

// Uniform(0,1) amplitudes, rescaled to the budget.
PowerVector random_allocation(int streams, double total_power, std::uint64_t seed);
PowerVector random_allocation(const SystemConfig& cfg, std::uint64_t seed);

enum class PrivateRule { uniform, random };
enum class Goal { minimize, maximize };

using Metric = std::function<double(const PowerVector&)>;

struct DeltaSearchResult {
  double delta = 0.0;
  PowerVector coeffs;
  double value = 0.0;
  std::vector<double> evaluated_deltas;
};

// Common-stream share delta in {0, step, 2 step, ..., 1}; the private share is
// split uniformly or with one fixed random split drawn from `seed`. Ties go to
// the smaller delta.
DeltaSearchResult grid_search_delta(int streams, double total_power, PrivateRule rule, double grid_step,
                                    const Metric& metric, Goal goal, std::uint64_t seed = 0);

// Number of ways to split 1/grid_step power quanta over streams + 1 coefficients.
std::uint64_t full_grid_candidate_count(int streams, double grid_step);

struct FullSearchResult {
  PowerVector coeffs;
  double value = 0.0;
  std::uint64_t candidates = 0;
};

// Exhaustive search over squared-amplitude fractions on the grid. Refuses
// (ConfigError naming the count) when the candidate count exceeds `budget`.
FullSearchResult grid_search_full(const Metric& metric, int streams, double grid_step, double total_power, Goal goal,
                                  std::uint64_t budget = 2'000'000);

}  // namespace rsapa
