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
#include <string>
#include <vector>

#include "rsapa/config.hpp"

namespace rsapa {

struct SweepRow {
  double snr_db = 0.0;
  double err_var = 0.0;
  std::string scheme;
  double esr = 0.0;
  double common_term = 0.0;
  double private_sum = 0.0;
  double ac_sq_fraction = 0.0;
  int n_channels = 0;
  int n_errors = 0;
  std::uint64_t seed = 0;
};

struct ConvergenceRow {
  int iteration = 0;
  std::string scheme;
  double objective = 0.0;
  double esr = 0.0;
  double ac_sq_fraction = 0.0;
  double snr_db = 0.0;
  double err_var = 0.0;
};

struct ComplexityRow {
  int n = 0;
  std::string scheme;
  double flops_per_iteration = 0.0;
  std::uint64_t iterations = 0;
  double total_flops = 0.0;
  std::string big_o;
  // Wall clock; not reproducible. Zero for rows without a measurement.
  double first_iteration_s = 0.0;
  double cached_iteration_s = 0.0;
};

// One row per (SNR point, scheme) at the scenario's error variance.
std::vector<SweepRow> run_snr_sweep(const ExperimentSpec& spec);
// One row per (error variance, scheme) at the first SNR of the grid.
std::vector<SweepRow> run_error_sweep(const ExperimentSpec& spec);
// One row per (iteration, adaptive scheme) at the first SNR of the grid.
std::vector<ConvergenceRow> run_convergence(const ExperimentSpec& spec);
// Rows per (n, algorithm); adaptive rows carry wall-clock measurements when
// `measure` is set.
std::vector<ComplexityRow> run_complexity_table(const std::vector<int>& n_grid, int iterations, double grid_step,
                                                bool measure, std::uint64_t seed);

// Adaptive schemes pick up the experiment's step size and iteration count.
std::vector<Scheme> resolved_schemes(const ExperimentSpec& spec);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows);
std::string complexity_csv(const std::vector<ComplexityRow>& rows);

// "-" writes to stdout. Throws IoError on failure.
void write_output(const std::string& path, const std::string& text);

}  // namespace rsapa

namespace rsapa {

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Gradient finite-difference, closed-form-vs-Monte-Carlo, reduction and
// convexity checks on random N_t = M = 4 instances.
std::vector<ValidationCheck> run_validation(int instances, int oracle_draws, std::uint64_t seed);

}  // namespace rsapa
