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

// Reference computations for tests. They are written from the signal model
// directly and share no code with the library's closed forms or kernels.

#include <cmath>
#include <complex>
#include <vector>

#include "rsapa/types.hpp"

namespace rsapa::testing {

// E||s - T(H_eff P diag(a) s + n)||^2 with H_eff = H + E, E entries
// CN(0, err_var) and unit-variance symbols:
//   ||I - T H P D||_F^2 + noise_var ||T||_F^2 + err_var ||T||_F^2 ||P D||_F^2.
inline double mse_matrix_form(const CMatrix& h_rows, const CMatrix& stacked, const RVector& a, double noise_var,
                              double err_var) {
  const Eigen::Index m = h_rows.rows();
  CMatrix t = CMatrix::Zero(m + 1, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    t(0, i) = 1.0;
    t(i + 1, i) = 1.0;
  }
  const CMatrix pd = stacked * a.cast<cplx>().asDiagonal();
  const CMatrix residual = CMatrix::Identity(m + 1, m + 1) - t * h_rows * pd;
  const double t_fro = t.squaredNorm();
  return residual.squaredNorm() + noise_var * t_fro + err_var * t_fro * pd.squaredNorm();
}

// Central differences of f at a, one coordinate at a time.
template <typename F>
RVector finite_difference_gradient(F&& f, const RVector& a, double h) {
  RVector g(a.size());
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    RVector up = a;
    RVector down = a;
    up(k) += h;
    down(k) -= h;
    g(k) = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

inline cplx naive_dot(const CMatrix& h, Eigen::Index row, const CMatrix& p, Eigen::Index col) {
  cplx s = 0.0;
  for (Eigen::Index n = 0; n < h.cols(); ++n) s += h(row, n) * p(n, col);
  return s;
}

// Common-stream SINR seen on channel row `row`; stacked column 0 is common.
inline double naive_sinr_common(const CMatrix& h, Eigen::Index row, const CMatrix& stacked, const RVector& a,
                                double noise_var) {
  double interference = 0.0;
  for (Eigen::Index q = 1; q < stacked.cols(); ++q) interference += a(q) * a(q) * std::norm(naive_dot(h, row, stacked, q));
  return a(0) * a(0) * std::norm(naive_dot(h, row, stacked, 0)) / (interference + noise_var);
}

// Private stream j on row j after removal of the common stream.
inline double naive_sinr_private(const CMatrix& h, Eigen::Index j, const CMatrix& stacked, const RVector& a,
                                 double noise_var) {
  double interference = 0.0;
  for (Eigen::Index q = 1; q < stacked.cols(); ++q) {
    if (q == j + 1) continue;
    interference += a(q) * a(q) * std::norm(naive_dot(h, j, stacked, q));
  }
  return a(j + 1) * a(j + 1) * std::norm(naive_dot(h, j, stacked, j + 1)) / (interference + noise_var);
}

// Spearman rank correlation; ties get the average rank.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double below = 0.0, equal = 0.0;
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (v[k] < v[i]) below += 1.0;
        else if (v[k] == v[i]) equal += 1.0;
      }
      r[i] = below + (equal + 1.0) / 2.0;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i] / n;
    my += ry[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return (sxx > 0 && syy > 0) ? sxy / std::sqrt(sxx * syy) : 0.0;
}

}  // namespace rsapa::testing
