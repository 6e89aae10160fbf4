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

#include "rsapa/model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "rsapa/errors.hpp"
#include "rsapa/rng.hpp"

namespace rsapa {

int SystemConfig::total_rx() const {
  return std::accumulate(rx_antennas_per_user.begin(), rx_antennas_per_user.end(), 0);
}

int SystemConfig::streams() const { return std::accumulate(streams_per_user.begin(), streams_per_user.end(), 0); }

void SystemConfig::validate() const {
  if (n_tx < 1) throw ConfigError("n_tx must be at least 1");
  if (users < 1) throw ConfigError("users must be at least 1");
  if (static_cast<int>(rx_antennas_per_user.size()) != users) {
    throw ConfigError("rx_antennas_per_user must list one entry per user");
  }
  if (static_cast<int>(streams_per_user.size()) != users) {
    throw ConfigError("streams_per_user must list one entry per user");
  }
  for (int k = 0; k < users; ++k) {
    const int nk = rx_antennas_per_user[static_cast<std::size_t>(k)];
    const int mk = streams_per_user[static_cast<std::size_t>(k)];
    if (nk < 1) throw ConfigError("user " + std::to_string(k) + " needs at least one receive antenna");
    if (mk < 1) throw ConfigError("user " + std::to_string(k) + " needs at least one stream");
    if (mk > nk) throw ConfigError("user " + std::to_string(k) + " has more streams than receive antennas");
  }
  if (streams() > total_rx()) throw ConfigError("stream count exceeds total receive antennas");
  if (!(noise_var > 0.0)) throw ConfigError("noise_var must be positive");
  if (!(err_var >= 0.0)) throw ConfigError("err_var must be nonnegative");
  if (!(err_var < 1.0)) throw ConfigError("err_var must be below the unit channel variance");
  if (!(total_power > 0.0)) throw ConfigError("total_power must be positive");
}

SystemConfig SystemConfig::symmetric(int n_tx, int users, int rx_per_user, int streams_per_user) {
  SystemConfig cfg;
  cfg.n_tx = n_tx;
  cfg.users = users;
  cfg.rx_antennas_per_user.assign(static_cast<std::size_t>(users), rx_per_user);
  cfg.streams_per_user.assign(static_cast<std::size_t>(users), streams_per_user);
  return cfg;
}

double snr_db_to_total_power(double snr_db, double noise_var) { return std::pow(10.0, snr_db / 10.0) * noise_var; }

StreamLayout stream_layout(const SystemConfig& cfg) {
  cfg.validate();
  StreamLayout layout;
  int row_base = 0;
  for (int k = 0; k < cfg.users; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    layout.user_first_stream.push_back(layout.streams());
    for (int s = 0; s < cfg.streams_per_user[uk]; ++s) {
      layout.stream_user.push_back(k);
      layout.stream_row.push_back(row_base + s);
    }
    row_base += cfg.rx_antennas_per_user[uk];
  }
  return layout;
}

CMatrix stream_rows(const CMatrix& full_channel, const StreamLayout& layout) {
  CMatrix rows(layout.streams(), full_channel.cols());
  for (int j = 0; j < layout.streams(); ++j) {
    const int r = layout.stream_row[static_cast<std::size_t>(j)];
    if (r >= full_channel.rows()) throw DomainError("stream_rows: channel has too few rows for the layout");
    rows.row(j) = full_channel.row(r);
  }
  return rows;
}

CMatrix draw_estimate(const SystemConfig& cfg, std::uint64_t trial_index) {
  cfg.validate();
  Rng rng(cfg.master_seed, Stream::estimate, trial_index);
  return rng.complex_normal_matrix(cfg.total_rx(), cfg.n_tx, 1.0 - cfg.err_var);
}

CMatrix draw_error(const SystemConfig& cfg, std::uint64_t trial_index, std::uint64_t error_index, Stream stream) {
  cfg.validate();
  if (cfg.err_var == 0.0) return CMatrix::Zero(cfg.total_rx(), cfg.n_tx);
  Rng rng(cfg.master_seed, stream, trial_index, error_index);
  return rng.complex_normal_matrix(cfg.total_rx(), cfg.n_tx, cfg.err_var);
}

ChannelRealization generate_channel(const SystemConfig& cfg, std::uint64_t trial_index) {
  ChannelRealization r;
  r.estimate = draw_estimate(cfg, trial_index);
  r.error = draw_error(cfg, trial_index, 0);
  r.true_channel = r.estimate + r.error;
  return r;
}

CVector TransformMatrix::apply(const CVector& y) const {
  if (y.size() != entries.cols()) throw DomainError("transform: vector length does not match stream count");
  return entries.cast<cplx>() * y;
}

TransformMatrix build_transform(int m) {
  if (m < 1) throw DomainError("transform: stream count must be at least 1");
  TransformMatrix t;
  t.entries = RMatrix::Zero(m + 1, m);
  t.entries.row(0).setOnes();
  t.entries.bottomRows(m).setIdentity();
  return t;
}

CVector transmit_signal(const PrecoderSet& p, const PowerVector& a, const CVector& symbols) {
  const int m = p.streams();
  if (a.streams() != m || symbols.size() != m + 1 || p.common.size() != p.priv.rows()) {
    throw DomainError("transmit_signal: dimension mismatch");
  }
  CVector x = a.common() * symbols(0) * p.common;
  for (int j = 0; j < m; ++j) x += a.stream(j) * symbols(j + 1) * p.priv.col(j);
  return x;
}

}  // namespace rsapa
