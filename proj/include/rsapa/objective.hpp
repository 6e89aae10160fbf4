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

#include "rsapa/model.hpp"
#include "rsapa/power.hpp"
#include "rsapa/precoders.hpp"
#include "rsapa/types.hpp"

namespace rsapa {

enum class ChannelSource { estimate, truth };

// Inner products of the stream rows with the precoders, plus the aggregates
// every MSE, gradient and step bound is assembled from. Built once per
// channel/precoder pair; allocator iterations only touch the cached scalars.
struct CouplingTable {
  // (i, q): row i of the channel times private column q.
  CMatrix phi_private;
  // (i): row i times the common precoder.
  CVector phi_common;
  // Per stream j: sum_{q<r} Re{conj(phi(q,j)) phi(r,j)}.
  RVector cross_private;
  // sum_{q != r} conj(phi(q,c)) phi(r,c); real because conjugate pairs cancel.
  double cross_common = 0.0;
  // Per stream j: sum_l |phi(l,j)|^2.
  RVector private_energy;
  // sum_i |phi(i,c)|^2
  double common_energy = 0.0;
  // ||p_j||^2 and ||p_c||^2 (1 for normalized precoders).
  RVector private_norm_sq;
  double common_norm_sq = 0.0;
  ChannelSource source = ChannelSource::estimate;

  int streams() const { return static_cast<int>(phi_common.size()); }
  bool is_zero() const;
};

// `channel` must have at least M rows; the first M are used.
CouplingTable build_coupling(const CMatrix& channel, const PrecoderSet& p, ChannelSource source);

// Selects each stream's receive row from a full N_r x N_t channel first.
CouplingTable build_coupling(const CMatrix& full_channel, const StreamLayout& layout, const PrecoderSet& p,
                             ChannelSource source);

// Conditional MSE E[||s - T y||^2] on a known channel.
double mse_apa(const PowerVector& a, const CouplingTable& ct, double noise_var);

// MSE conditioned on the estimate, averaging over CSIT errors with per-entry
// variance err_var. Equals mse_apa when err_var is zero.
double mse_apar(const PowerVector& a, const CouplingTable& ct, double err_var, double noise_var);

RVector grad_apa(const PowerVector& a, const CouplingTable& ct);
RVector grad_apar(const PowerVector& a, const CouplingTable& ct, double err_var);

// The objectives are separable quadratics,
//   mse(a) = sum_i curvature_i a_i^2 - 2 sum_i linear_i a_i + constant,
// with index 0 the common stream. err_var = 0 gives the APA objective.
struct SeparableQuadratic {
  RVector curvature;
  RVector linear;
  double constant = 0.0;
};

SeparableQuadratic separable_form(const CouplingTable& ct, double err_var, double noise_var);

struct UnconstrainedMinimum {
  PowerVector coeffs;
  // Each coefficient's contribution to the MSE at the minimizer,
  // a_i (curvature_i a_i - 2 linear_i) = -linear_i^2 / curvature_i.
  RVector mse_min;
};

// Closed-form minimizer of the unconstrained objective (no power constraint,
// no sign constraint). Throws DegeneracyError if a curvature is not positive.
UnconstrainedMinimum unconstrained_minimizer(const CouplingTable& ct, double err_var = 0.0);

// Difference E[eps(APA at a_o + a_e)] - E[eps(APA-R at a_o)] written as the
// quadratic in the allocation error a_e alone (linear terms in a_e plus the
// curvature terms), and the two sufficient conditions under which that
// expression is positive.
double robust_gap_expression(const PowerVector& allocation_error, const CouplingTable& ct, double err_var);
bool robust_gap_conditions(const PowerVector& allocation_error, const CouplingTable& ct, double err_var);

struct OracleEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t draws = 0;
};

// Monte-Carlo estimate of E||s - T y||^2 by direct simulation: unit-variance
// complex Gaussian symbols, CN(0, noise_var) noise and, when err_var > 0,
// CN(0, err_var) perturbations of every entry of `channel` (the estimate).
// `channel` holds one row per stream.
OracleEstimate mse_oracle(const PowerVector& a, const CMatrix& channel, const PrecoderSet& p, double noise_var,
                          double err_var, std::uint64_t n_draws, std::uint64_t seed);

}  // namespace rsapa
