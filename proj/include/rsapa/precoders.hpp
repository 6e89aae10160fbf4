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

#include <string_view>

#include "rsapa/types.hpp"

namespace rsapa {

enum class PrecoderKind { mf, zf, mmse };

std::string_view to_string(PrecoderKind kind);
PrecoderKind parse_precoder_kind(std::string_view name);

// Unit-norm common precoder p_c plus one unit-norm private column per stream.
struct PrecoderSet {
  CVector common;
  CMatrix priv;
  PrecoderKind kind = PrecoderKind::zf;

  int streams() const { return static_cast<int>(priv.cols()); }
  int n_tx() const { return static_cast<int>(priv.rows()); }

  // [p_c, p_1, ..., p_M]
  CMatrix stacked() const;
};

// Private precoder before column normalization. `estimate` holds one row per
// stream (M x N_t).
//   MF   : H^H
//   ZF   : H^H (H H^H)^{-1}
//   MMSE : H^H (H H^H + (M sigma_n^2 / E_tr) I)^{-1}
// Throws SingularityError when ZF is requested for a rank-deficient estimate.
CMatrix raw_private_precoder(PrecoderKind kind, const CMatrix& estimate, double noise_var, double total_power);

// Unit-norm columns; the phase is the one the formula produces, so MF and ZF
// give a real positive h_j p_j.
CMatrix make_private_precoder(PrecoderKind kind, const CMatrix& estimate, double noise_var, double total_power);

// Right singular vector of the largest singular value, rotated so that
// sum_i h_i p_c is real and nonnegative (first-nonzero-entry rule when that sum
// vanishes).
CVector make_common_precoder(const CMatrix& estimate);

PrecoderSet make_precoders(PrecoderKind kind, const CMatrix& estimate, double noise_var, double total_power);

// Scales to unit norm and rotates so the first nonzero entry is real and
// nonnegative. Throws DomainError for a zero vector.
void normalize_column(Eigen::Ref<CVector> column);

}  // namespace rsapa
