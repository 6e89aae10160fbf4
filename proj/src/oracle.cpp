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

#include <cmath>

#include "rsapa/errors.hpp"
#include "rsapa/objective.hpp"
#include "rsapa/rng.hpp"

namespace rsapa {

OracleEstimate mse_oracle(const PowerVector& a, const CMatrix& channel, const PrecoderSet& p, double noise_var,
                          double err_var, std::uint64_t n_draws, std::uint64_t seed) {
  const int m = p.streams();
  if (a.streams() != m || channel.rows() != m || channel.cols() != p.n_tx()) {
    throw DomainError("mse_oracle: dimension mismatch");
  }
  if (n_draws < 2) throw DomainError("mse_oracle: need at least two draws");
  if (!(err_var >= 0.0)) throw DomainError("mse_oracle: err_var must be nonnegative");

  // Effective transmit matrix P diag(a), (N_t x (M+1)).
  const CMatrix weighted = p.stacked() * a.coeffs.cast<cplx>().asDiagonal();
  const CMatrix fixed_gain = channel * weighted;
  const CMatrix transform = build_transform(m).entries.cast<cplx>();

  Rng rng(seed, Stream::oracle, 0);
  double mean = 0.0;
  double m2 = 0.0;
  CVector y(m);
  CVector combined(m + 1);
  for (std::uint64_t d = 0; d < n_draws; ++d) {
    const CVector s = rng.complex_normal_vector(m + 1, 1.0);
    const CVector n = rng.complex_normal_vector(m, noise_var);
    if (err_var > 0.0) {
      const CMatrix err = rng.complex_normal_matrix(m, p.n_tx(), err_var);
      y.noalias() = fixed_gain * s;
      y.noalias() += err * (weighted * s);
    } else {
      y.noalias() = fixed_gain * s;
    }
    y += n;
    combined.noalias() = transform * y;
    const double eps = (s - combined).squaredNorm();
    // Welford update.
    const double delta = eps - mean;
    mean += delta / static_cast<double>(d + 1);
    m2 += delta * (eps - mean);
  }
  OracleEstimate out;
  out.mean = mean;
  out.draws = n_draws;
  out.std_error = std::sqrt(m2 / static_cast<double>(n_draws - 1) / static_cast<double>(n_draws));
  return out;
}

}  // namespace rsapa
