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
#include <vector>

#include "rsapa/power.hpp"
#include "rsapa/precoders.hpp"
#include "rsapa/rng.hpp"
#include "rsapa/types.hpp"

namespace rsapa {

// One downlink scenario. The base station has n_tx antennas and serves
// `users` receivers; user k has rx_antennas_per_user[k] antennas and receives
// streams_per_user[k] private streams.
struct SystemConfig {
  int n_tx = 4;
  int users = 2;
  std::vector<int> rx_antennas_per_user{2, 2};
  std::vector<int> streams_per_user{2, 2};
  double noise_var = 1.0;
  double err_var = 0.1;
  double total_power = 100.0;
  std::uint64_t master_seed = 1;

  int total_rx() const;
  int streams() const;

  // Throws ConfigError when an invariant is violated.
  void validate() const;

  // n_tx antennas, `users` users with identical antenna and stream counts.
  static SystemConfig symmetric(int n_tx, int users, int rx_per_user, int streams_per_user);
};

double snr_db_to_total_power(double snr_db, double noise_var);

// Stream j is received on antenna row stream_row[j] of the full N_r x N_t
// channel: user k's streams use the first M_k rows of H_k. All per-stream
// formulas work on the M x N_t matrix of those rows.
struct StreamLayout {
  std::vector<int> stream_user;
  std::vector<int> stream_row;
  std::vector<int> user_first_stream;

  int streams() const { return static_cast<int>(stream_user.size()); }
  int users() const { return static_cast<int>(user_first_stream.size()); }
};

StreamLayout stream_layout(const SystemConfig& cfg);

// The M x N_t matrix of rows assigned to streams.
CMatrix stream_rows(const CMatrix& full_channel, const StreamLayout& layout);

// H = estimate + error. Entries of the estimate are CN(0, 1 - err_var) and
// entries of the error are CN(0, err_var), so the true channel has unit
// per-entry variance for every error level.
struct ChannelRealization {
  CMatrix true_channel;
  CMatrix estimate;
  CMatrix error;
};

CMatrix draw_estimate(const SystemConfig& cfg, std::uint64_t trial_index);
CMatrix draw_error(const SystemConfig& cfg, std::uint64_t trial_index, std::uint64_t error_index,
                   Stream stream = Stream::error);

// Estimate for the trial plus its first error draw.
ChannelRealization generate_channel(const SystemConfig& cfg, std::uint64_t trial_index);

// (M+1) x M combiner: first row all ones, then the identity.
struct TransformMatrix {
  RMatrix entries;

  CVector apply(const CVector& y) const;
};

TransformMatrix build_transform(int m);

// x = a_c s_c p_c + sum_m a_m s_m p_m, with s = [s_c, s_1, ..., s_M].
CVector transmit_signal(const PrecoderSet& p, const PowerVector& a, const CVector& symbols);

}  // namespace rsapa
