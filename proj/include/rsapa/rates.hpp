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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsapa/alloc.hpp"
#include "rsapa/model.hpp"
#include "rsapa/power.hpp"
#include "rsapa/precoders.hpp"

namespace rsapa {

// SINRs are evaluated on the true channel rows (one row per stream). When
// `numerator_rows` is given, the desired-signal term uses those rows instead
// (e.g. the estimate) while interference still uses the true channel.
struct SinrInputs {
  const CMatrix& channel_rows;
  const PrecoderSet& precoders;
  const PowerVector& power;
  double noise_var;
  const StreamLayout& layout;
  const CMatrix* numerator_rows = nullptr;
};

// User k decodes the common stream on its first assigned row, treating every
// private stream as noise.
double sinr_common(int user, const SinrInputs& in);

// Stream j after the common stream has been removed by SIC; every other
// private stream interferes.
double sinr_private(int stream, const SinrInputs& in);

struct InstantRates {
  RVector common_per_user;
  RVector private_per_stream;
};

// log2(1 + SINR) for every user's common rate and every private stream.
InstantRates instantaneous_rates(const SinrInputs& in);

enum class SchemeKind {
  conventional_upa,
  conventional_random,
  rs_random,
  rs_es_upa,
  rs_es_random,
  rs_es_full,
  rs_apa,
  rs_apar,
};

struct Scheme {
  SchemeKind kind = SchemeKind::rs_apar;
  std::string label;
  // Adaptive schemes: fixed step size (default: half the stability bound).
  std::optional<double> step_size;
  int iterations = 30;
  // Common-share grid for the rs-es-* searches.
  double grid_step = 0.01;
  // Squared-fraction grid for rs-es-full.
  double full_grid_step = 0.1;
};

std::string_view scheme_name(SchemeKind kind);
// Names: conventional-upa, conventional-random, rs-random, rs-es-upa,
// rs-es-random, rs-es-full, rs-apa, rs-apa-r.
Scheme make_scheme(std::string_view name);
bool is_adaptive(SchemeKind kind);

struct EvaluationOptions {
  int n_channels = 200;
  int n_errors = 50;
  // CSIT-error draws the transmitter uses to score candidates in the
  // exhaustive searches; independent of the evaluation draws.
  int search_draws = 50;
  int jobs = 1;
  bool literal_numerator = false;
};

struct RateReport {
  std::string label;
  // Outer averages of the per-estimate average rates.
  RVector avg_common;
  RVector avg_private;
  // min_k avg_common(k)
  double common_term = 0.0;
  double private_sum = 0.0;
  double ergodic_sum_rate = 0.0;
  double ac_sq_fraction = 0.0;
  // Mean conditional objective (APA-R form) at the chosen allocation.
  double mean_conditional_mse = 0.0;
  int n_channel_draws = 0;
  int n_error_draws = 0;
  int failed_draws = 0;
};

// Nested Monte Carlo: outer draws of the estimate (precoders and allocation
// computed from it alone), inner draws of the CSIT error. All schemes see the
// same draws. cfg.master_seed keys every draw.
std::vector<RateReport> evaluate_schemes(const SystemConfig& cfg, PrecoderKind kind, const std::vector<Scheme>& schemes,
                                         const EvaluationOptions& opts);

RateReport ergodic_sum_rate(const SystemConfig& cfg, PrecoderKind kind, const Scheme& scheme, int n_channels,
                            int n_errors, std::uint64_t seed, int jobs = 1);

struct ConvergencePoint {
  int iteration = 0;
  double mean_objective = 0.0;
  double esr = 0.0;
  double ac_sq_fraction = 0.0;
};

// Objective and ergodic sum rate of an adaptive scheme's iterate at every
// iteration, averaged over the same nested draws as evaluate_schemes.
std::vector<ConvergencePoint> convergence_trace(const SystemConfig& cfg, PrecoderKind kind, const Scheme& scheme,
                                                const EvaluationOptions& opts);

// Neumaier-compensated running sum; used so aggregation error does not depend
// on the number of draws folded in.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace rsapa
