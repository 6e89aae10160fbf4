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

#include "doctest.h"
#include "oracles.hpp"
#include "rsapa/errors.hpp"
#include "rsapa/objective.hpp"
#include "rsapa/precoders.hpp"
#include "rsapa/rng.hpp"

using namespace rsapa;

namespace {

struct Instance {
  CMatrix h;
  PrecoderSet p;
  CouplingTable ct;
  PowerVector a;
};

Instance random_instance(std::uint64_t seed, int n = 4, PrecoderKind kind = PrecoderKind::mf) {
  Rng rng(seed);
  Instance in;
  in.h = rng.complex_normal_matrix(n, n, 1.0);
  in.p = make_precoders(kind, in.h, 1.0, 10.0);
  in.ct = build_coupling(in.h, in.p, ChannelSource::estimate);
  in.a = PowerVector(n);
  for (Eigen::Index i = 0; i < in.a.coeffs.size(); ++i) in.a.coeffs(i) = 2.0 * rng.uniform();
  return in;
}

}  // namespace

TEST_CASE("coupling of the identity channel") {
  PrecoderSet p;
  p.priv = CMatrix::Identity(4, 4);
  p.common = CVector::Unit(4, 0);
  const CouplingTable ct = build_coupling(CMatrix::Identity(4, 4), p, ChannelSource::truth);
  CHECK(ct.phi_private == CMatrix::Identity(4, 4));
  CHECK(ct.phi_common == CVector::Unit(4, 0));
  CHECK(ct.source == ChannelSource::truth);
  CHECK(ct.cross_common == 0.0);
}

TEST_CASE("cached entries are the direct dot products") {
  const Instance in = random_instance(1);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(in.ct.phi_common(i) - testing::naive_dot(in.h, i, in.p.stacked(), 0)) < 1e-14);
    for (int q = 0; q < 4; ++q) CHECK(std::abs(in.ct.phi_private(i, q) - testing::naive_dot(in.h, i, in.p.priv, q)) < 1e-14);
  }
}

TEST_CASE("common cross term identity") {
  const Instance in = random_instance(2);
  const double lhs = in.ct.cross_common;
  const double rhs = std::norm(in.ct.phi_common.sum()) - in.ct.phi_common.squaredNorm();
  CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("coupling rejects mismatched shapes") {
  const Instance in = random_instance(3);
  CHECK_THROWS_AS(build_coupling(CMatrix::Zero(4, 3), in.p, ChannelSource::estimate), DomainError);
  CHECK_THROWS_AS(build_coupling(CMatrix::Zero(2, 4), in.p, ChannelSource::estimate), DomainError);
}

TEST_CASE("objective at zero allocation") {
  const Instance in = random_instance(4, 3);
  const PowerVector zero(3);
  CHECK(mse_apa(zero, in.ct, 1.0) == doctest::Approx(10.0));
  CHECK(mse_apar(zero, in.ct, 0.3, 1.0) == doctest::Approx(10.0));
  const RVector g = grad_apa(zero, in.ct);
  CHECK(g(0) == doctest::Approx(-2.0 * in.ct.phi_common.real().sum()));
}

TEST_CASE("closed forms equal the matrix-form expectation") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Instance in = random_instance(100 + s, 2 + static_cast<int>(s % 4), s % 2 ? PrecoderKind::zf : PrecoderKind::mf);
    for (const double ev : {0.0, 0.05, 0.2}) {
      const double expected = testing::mse_matrix_form(in.h, in.p.stacked(), in.a.coeffs, 0.7, ev);
      CHECK(mse_apar(in.a, in.ct, ev, 0.7) == doctest::Approx(expected).epsilon(1e-11));
    }
    CHECK(mse_apa(in.a, in.ct, 0.7) == doctest::Approx(testing::mse_matrix_form(in.h, in.p.stacked(), in.a.coeffs, 0.7, 0.0)).epsilon(1e-11));
  }
}

TEST_CASE("closed forms agree with Monte-Carlo simulation") {
  const Instance in = random_instance(5);
  const OracleEstimate plain = mse_oracle(in.a, in.h, in.p, 1.0, 0.0, 100000, 17);
  CHECK(std::abs(plain.mean - mse_apa(in.a, in.ct, 1.0)) < 3.0 * plain.std_error);
  const OracleEstimate robust = mse_oracle(in.a, in.h, in.p, 1.0, 0.1, 100000, 18);
  CHECK(std::abs(robust.mean - mse_apar(in.a, in.ct, 0.1, 1.0)) < 3.0 * robust.std_error);
  const OracleEstimate zero = mse_oracle(PowerVector(4), in.h, in.p, 1.0, 0.0, 100000, 19);
  CHECK(std::abs(zero.mean - 13.0) < 3.0 * zero.std_error);
  CHECK(plain.draws == 100000);
}

TEST_CASE("robust objective reduces to the plain one") {
  const Instance in = random_instance(6);
  CHECK(mse_apar(in.a, in.ct, 0.0, 1.0) == mse_apa(in.a, in.ct, 1.0));
  CHECK(grad_apar(in.a, in.ct, 0.0) == grad_apa(in.a, in.ct));
  CHECK_THROWS_AS(mse_apar(in.a, in.ct, -0.1, 1.0), DomainError);
}

TEST_CASE("gradients match finite differences") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Instance in = random_instance(200 + s);
    for (const double ev : {0.0, 0.1}) {
      const auto f = [&](const RVector& x) { return mse_apar(PowerVector(x), in.ct, ev, 1.0); };
      const RVector fd = testing::finite_difference_gradient(f, in.a.coeffs, 1e-6);
      const RVector g = grad_apar(in.a, in.ct, ev);
      for (Eigen::Index k = 0; k < g.size(); ++k) {
        CHECK(std::abs(fd(k) - g(k)) / std::max(1.0, std::abs(g(k))) < 1e-6);
      }
    }
  }
}

TEST_CASE("each partial is linear in its own coefficient") {
  const Instance in = random_instance(7);
  for (int j = 0; j < 4; ++j) {
    PowerVector one = in.a, two = in.a;
    one.stream(j) = 1.0;
    two.stream(j) = 2.0;
    const double slope = grad_apa(two, in.ct)(j + 1) - grad_apa(one, in.ct)(j + 1);
    CHECK(slope == doctest::Approx(4.0 * (in.ct.private_energy(j) + in.ct.cross_private(j))).epsilon(1e-13));
    // Other partials do not move.
    for (int k = 0; k < 5; ++k) {
      if (k != j + 1) CHECK(grad_apa(two, in.ct)(k) == grad_apa(one, in.ct)(k));
    }
  }
}

TEST_CASE("second differences are constant and positive") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Instance in = random_instance(300 + s);
    for (const double ev : {0.0, 0.1}) {
      const SeparableQuadratic q = separable_form(in.ct, ev, 1.0);
      for (int k = 0; k < 5; ++k) {
        const double h = 0.25;
        auto second = [&](double base) {
          PowerVector lo = in.a, mid = in.a, hi = in.a;
          lo.coeffs(k) = base - h;
          mid.coeffs(k) = base;
          hi.coeffs(k) = base + h;
          return (mse_apar(hi, in.ct, ev, 1.0) - 2.0 * mse_apar(mid, in.ct, ev, 1.0) + mse_apar(lo, in.ct, ev, 1.0)) / (h * h);
        };
        const double d1 = second(0.3);
        const double d2 = second(3.0);
        CHECK(d1 > 0.0);
        CHECK(d1 == doctest::Approx(d2).epsilon(1e-8));
        CHECK(d1 == doctest::Approx(2.0 * q.curvature(k)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("separable form reproduces the objective") {
  const Instance in = random_instance(8);
  const SeparableQuadratic q = separable_form(in.ct, 0.1, 1.0);
  const double v = (q.curvature.array() * in.a.coeffs.array().square()).sum() - 2.0 * q.linear.dot(in.a.coeffs) + q.constant;
  CHECK(v == doctest::Approx(mse_apar(in.a, in.ct, 0.1, 1.0)).epsilon(1e-12));
}

TEST_CASE("scalar unconstrained minimizer") {
  CouplingTable ct;
  ct.phi_private = CMatrix::Constant(1, 1, cplx(1.0, 0.0));
  ct.phi_common = CVector::Zero(1);
  ct.cross_private = RVector::Zero(1);
  ct.private_energy = RVector::Constant(1, 1.0);
  ct.private_norm_sq = RVector::Constant(1, 1.0);
  ct.common_energy = 1.0;
  ct.common_norm_sq = 1.0;
  const UnconstrainedMinimum m = unconstrained_minimizer(ct);
  CHECK(m.coeffs.stream(0) == doctest::Approx(0.5));
  CHECK(m.mse_min(1) == doctest::Approx(-0.5));

  ct.common_energy = 0.0;
  CHECK_THROWS_AS(unconstrained_minimizer(ct), DegeneracyError);
}

TEST_CASE("minimizer is a stationary point and a local minimum") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Instance in = random_instance(400 + s);
    for (const double ev : {0.0, 0.1}) {
      const UnconstrainedMinimum m = unconstrained_minimizer(in.ct, ev);
      CHECK(grad_apar(m.coeffs, in.ct, ev).cwiseAbs().maxCoeff() < 1e-10);
      const double base = mse_apar(m.coeffs, in.ct, ev, 1.0);
      const SeparableQuadratic q = separable_form(in.ct, ev, 1.0);
      CHECK(base == doctest::Approx(q.constant + m.mse_min.sum()).epsilon(1e-12));
      for (int k = 0; k < 5; ++k) {
        for (const double eps : {-1e-3, 1e-3}) {
          PowerVector probe = m.coeffs;
          probe.coeffs(k) += eps;
          CHECK(mse_apar(probe, in.ct, ev, 1.0) >= base);
        }
      }
    }
  }
}

TEST_CASE("allocation error never lowers the conditional objective") {
  // With err_var > 0 the robust minimizer a_o minimizes the conditional MSE,
  // so any perturbation a_e costs sum_i curvature_i a_e,i^2 >= 0.
  Rng rng(9);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Instance in = random_instance(500 + s);
    const UnconstrainedMinimum m = unconstrained_minimizer(in.ct, 0.1);
    PowerVector e(4);
    for (Eigen::Index i = 0; i < 5; ++i) e.coeffs(i) = 0.1 * rng.normal();
    PowerVector shifted = m.coeffs;
    shifted.coeffs += e.coeffs;
    const double gap = mse_apar(shifted, in.ct, 0.1, 1.0) - mse_apar(m.coeffs, in.ct, 0.1, 1.0);
    CHECK(gap >= 0.0);
    const SeparableQuadratic q = separable_form(in.ct, 0.1, 1.0);
    CHECK(gap == doctest::Approx((q.curvature.array() * e.coeffs.array().square()).sum()).epsilon(1e-9));
  }
}

TEST_CASE("gap expression under its sufficient conditions") {
  // The two conditions bound the linear terms by the energy terms; the
  // remaining cross terms carry no sign, so the expression is nonnegative
  // whenever the conditions hold and those cross terms are nonnegative.
  Rng rng(10);
  int checked = 0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Instance in = random_instance(600 + s);
    PowerVector e(4);
    for (Eigen::Index i = 0; i < 5; ++i) e.coeffs(i) = rng.normal();
    if (!robust_gap_conditions(e, in.ct, 0.1)) continue;
    double cross = e.common() * e.common() * in.ct.cross_common;
    for (int j = 0; j < 4; ++j) cross += 2.0 * e.stream(j) * e.stream(j) * in.ct.cross_private(j);
    if (cross < 0.0) continue;
    ++checked;
    CHECK(robust_gap_expression(e, in.ct, 0.1) >= 0.0);
  }
  CHECK(checked > 10);
}
