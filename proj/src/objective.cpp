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

#include "rsapa/objective.hpp"

#include <cmath>
#include <span>

#include "rsapa/errors.hpp"
#include "rsapa/kernels.hpp"

namespace rsapa {

namespace {

void check_power(const PowerVector& a, const CouplingTable& ct) {
  if (a.streams() != ct.streams()) throw DomainError("power vector length does not match the coupling table");
}

void check_err_var(double err_var) {
  if (!(err_var >= 0.0)) throw DomainError("err_var must be nonnegative");
}

std::span<const cplx> column_span(const CMatrix& m, Eigen::Index j) {
  return {m.col(j).data(), static_cast<std::size_t>(m.rows())};
}

std::span<const cplx> vector_span(const CVector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

// Binding a CVector to column_span would go through a temporary CMatrix.
std::span<const cplx> column_span(const CVector&, Eigen::Index) = delete;

}  // namespace

bool CouplingTable::is_zero() const {
  return phi_private.cwiseAbs().maxCoeff() == 0.0 && phi_common.cwiseAbs().maxCoeff() == 0.0;
}

CouplingTable build_coupling(const CMatrix& channel, const PrecoderSet& p, ChannelSource source) {
  const int m = p.streams();
  if (m < 1) throw DomainError("build_coupling: precoder set has no streams");
  if (channel.rows() < m) throw DomainError("build_coupling: channel has fewer rows than streams");
  if (channel.cols() != p.n_tx() || p.common.size() != p.n_tx()) {
    throw DomainError("build_coupling: channel and precoder antenna counts differ");
  }

  CouplingTable ct;
  ct.source = source;
  const CMatrix rows_t = channel.topRows(m).transpose();
  ct.phi_private = kernels::products(rows_t, p.priv);
  ct.phi_common = kernels::products(rows_t, p.common);

  ct.private_energy.resize(m);
  ct.cross_private.resize(m);
  ct.private_norm_sq.resize(m);
  for (int j = 0; j < m; ++j) {
    const auto col = column_span(ct.phi_private, j);
    ct.private_energy(j) = kernels::sq_norm(col);
    ct.cross_private(j) = kernels::pairwise_cross(col);
    ct.private_norm_sq(j) = kernels::sq_norm(column_span(p.priv, j));
  }
  const auto common = vector_span(ct.phi_common);
  ct.common_energy = kernels::sq_norm(common);
  ct.cross_common = 2.0 * kernels::pairwise_cross(common);
  ct.common_norm_sq = kernels::sq_norm(vector_span(p.common));
  return ct;
}

CouplingTable build_coupling(const CMatrix& full_channel, const StreamLayout& layout, const PrecoderSet& p,
                             ChannelSource source) {
  return build_coupling(stream_rows(full_channel, layout), p, source);
}

double mse_apar(const PowerVector& a, const CouplingTable& ct, double err_var, double noise_var) {
  check_power(a, ct);
  check_err_var(err_var);
  const int m = ct.streams();
  const double md = m;
  const double ac = a.common();

  double common_gain = 0.0;
  for (int i = 0; i < m; ++i) common_gain += ct.phi_common(i).real();

  double value = -2.0 * ac * common_gain;
  for (int j = 0; j < m; ++j) value -= 2.0 * a.stream(j) * ct.phi_private(j, j).real();
  for (int j = 0; j < m; ++j) {
    const double aj2 = a.stream(j) * a.stream(j);
    value += 2.0 * aj2 * (ct.private_energy(j) + md * err_var * ct.private_norm_sq(j));
  }
  value += 2.0 * ac * ac * (ct.common_energy + md * err_var * ct.common_norm_sq);
  for (int r = 0; r < m; ++r) value += 2.0 * a.stream(r) * a.stream(r) * ct.cross_private(r);
  value += ac * ac * ct.cross_common;
  value += md * (1.0 + 2.0 * noise_var) + 1.0;
  return value;
}

double mse_apa(const PowerVector& a, const CouplingTable& ct, double noise_var) {
  return mse_apar(a, ct, 0.0, noise_var);
}

RVector grad_apar(const PowerVector& a, const CouplingTable& ct, double err_var) {
  check_power(a, ct);
  check_err_var(err_var);
  const int m = ct.streams();
  const double md = m;
  RVector g(m + 1);

  double common_gain = 0.0;
  for (int i = 0; i < m; ++i) common_gain += ct.phi_common(i).real();
  const double ac = a.common();
  g(0) = 2.0 * ac * ct.cross_common - 2.0 * common_gain +
         4.0 * ac * (ct.common_energy + md * err_var * ct.common_norm_sq);

  for (int i = 0; i < m; ++i) {
    const double ai = a.stream(i);
    g(i + 1) = 4.0 * ai * ct.cross_private(i) - 2.0 * ct.phi_private(i, i).real() +
               4.0 * ai * (ct.private_energy(i) + md * err_var * ct.private_norm_sq(i));
  }
  return g;
}

RVector grad_apa(const PowerVector& a, const CouplingTable& ct) { return grad_apar(a, ct, 0.0); }

SeparableQuadratic separable_form(const CouplingTable& ct, double err_var, double noise_var) {
  check_err_var(err_var);
  const int m = ct.streams();
  const double md = m;
  SeparableQuadratic q;
  q.curvature.resize(m + 1);
  q.linear.resize(m + 1);
  q.curvature(0) = 2.0 * (ct.common_energy + md * err_var * ct.common_norm_sq) + ct.cross_common;
  q.linear(0) = 0.0;
  for (int i = 0; i < m; ++i) q.linear(0) += ct.phi_common(i).real();
  for (int j = 0; j < m; ++j) {
    q.curvature(j + 1) = 2.0 * (ct.private_energy(j) + ct.cross_private(j) + md * err_var * ct.private_norm_sq(j));
    q.linear(j + 1) = ct.phi_private(j, j).real();
  }
  q.constant = md * (1.0 + 2.0 * noise_var) + 1.0;
  return q;
}

UnconstrainedMinimum unconstrained_minimizer(const CouplingTable& ct, double err_var) {
  const SeparableQuadratic q = separable_form(ct, err_var, 1.0);
  UnconstrainedMinimum out;
  out.coeffs = PowerVector(ct.streams());
  out.mse_min.resize(q.curvature.size());
  for (Eigen::Index i = 0; i < q.curvature.size(); ++i) {
    if (!(q.curvature(i) > 0.0)) {
      throw DegeneracyError("unconstrained minimizer: nonpositive curvature for coefficient " + std::to_string(i));
    }
    const double ai = q.linear(i) / q.curvature(i);
    out.coeffs.coeffs(i) = ai;
    out.mse_min(i) = ai * (q.curvature(i) * ai - 2.0 * q.linear(i));
  }
  return out;
}

double robust_gap_expression(const PowerVector& e, const CouplingTable& ct, double err_var) {
  // Same terms as mse_apar without the constant, evaluated at the error.
  return mse_apar(e, ct, err_var, 0.0) - (static_cast<double>(ct.streams()) + 1.0);
}

bool robust_gap_conditions(const PowerVector& e, const CouplingTable& ct, double err_var) {
  check_power(e, ct);
  check_err_var(err_var);
  const int m = ct.streams();
  const double md = m;
  double common_gain = 0.0;
  for (int i = 0; i < m; ++i) common_gain += ct.phi_common(i).real();
  const double ace = e.common();
  const bool common_ok =
      -2.0 * ace * common_gain < 2.0 * ace * ace * (ct.common_energy + md * err_var * ct.common_norm_sq);

  double lhs = 0.0;
  double rhs = 0.0;
  for (int j = 0; j < m; ++j) {
    lhs += -2.0 * e.stream(j) * ct.phi_private(j, j).real();
    rhs += 2.0 * e.stream(j) * e.stream(j) * (ct.private_energy(j) + md * err_var * ct.private_norm_sq(j));
  }
  return common_ok && lhs < rhs;
}

}  // namespace rsapa
