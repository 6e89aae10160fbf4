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
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "rsapa/alloc.hpp"
#include "rsapa/errors.hpp"
#include "rsapa/precoders.hpp"
#include "rsapa/rng.hpp"

using namespace rsapa;

namespace {

CouplingTable random_table(std::uint64_t seed, PrecoderKind kind = PrecoderKind::mf, int n = 4) {
  Rng rng(seed);
  const CMatrix h = rng.complex_normal_matrix(n, n, 1.0);
  return build_coupling(h, make_precoders(kind, h, 1.0, 10.0), ChannelSource::estimate);
}

CouplingTable scalar_table(double phi) {
  CouplingTable ct;
  ct.phi_private = CMatrix::Constant(1, 1, cplx(phi, 0.0));
  ct.phi_common = CVector::Constant(1, cplx(phi, 0.0));
  ct.cross_private = RVector::Zero(1);
  ct.private_energy = RVector::Constant(1, phi * phi);
  ct.private_norm_sq = RVector::Constant(1, 1.0);
  ct.common_energy = phi * phi;
  ct.common_norm_sq = 1.0;
  return ct;
}

AllocatorOptions raw_options(double mu, int iterations) {
  AllocatorOptions o;
  o.step_size = mu;
  o.iterations = iterations;
  o.project = false;
  return o;
}

}  // namespace

TEST_CASE("scalar step bounds") {
  const StepBounds b = step_bounds(scalar_table(1.0), AllocMode::plain);
  CHECK(b.lambda_private(0) == doctest::Approx(1.0));
  CHECK(1.0 / (2.0 * b.lambda_private(0)) == doctest::Approx(0.5));
  CHECK(b.lambda_common == doctest::Approx(2.0));
  CHECK(b.mu_max == doctest::Approx(0.5));
  CHECK_FALSE(b.unstable_geometry);
}

TEST_CASE("robust bounds") {
  const CouplingTable ct = random_table(1);
  const StepBounds plain = step_bounds(ct, AllocMode::plain);
  const StepBounds zero = step_bounds(ct, AllocMode::robust, 0.0);
  CHECK(zero.lambda_private == plain.lambda_private);
  CHECK(zero.lambda_common == plain.lambda_common);
  CHECK(zero.mu_max == plain.mu_max);

  const StepBounds robust = step_bounds(ct, AllocMode::robust, 0.1);
  for (int j = 0; j < 4; ++j) {
    CHECK(robust.quoted_lambda_private(j) - plain.quoted_lambda_private(j) ==
          doctest::Approx(0.1 * ct.private_norm_sq(j)));
    CHECK(robust.lambda_private(j) - plain.lambda_private(j) == doctest::Approx(4 * 0.1 * ct.private_norm_sq(j)));
  }
  CHECK(robust.mu_max < plain.mu_max);
  // Printed common value subtracts the cross term.
  CHECK(plain.quoted_lambda_common == doctest::Approx(2.0 * ct.common_energy - ct.cross_common));
}

TEST_CASE("derived bound is the inverse of the largest curvature") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const CouplingTable ct = random_table(10 + s);
    for (const double ev : {0.0, 0.1}) {
      const StepBounds b = step_bounds(ct, AllocMode::robust, ev);
      const SeparableQuadratic q = separable_form(ct, ev, 1.0);
      CHECK(b.mu_max == doctest::Approx(1.0 / q.curvature.maxCoeff()));
    }
  }
}

TEST_CASE("zero channel leaves the allocation at its start") {
  CouplingTable ct = scalar_table(0.0);
  AllocatorOptions o;
  o.total_power = 4.0;
  const AllocatorRun run = run_apa(ct, 1.0, o);
  CHECK(run.final().coeffs.cwiseAbs().maxCoeff() == 0.0);
  CHECK(run.step_size == 0.0);
  CHECK(run.iterations == 30);
}

TEST_CASE("scalar recursion follows the geometric error law") {
  const double phi = 0.8;
  const CouplingTable ct = scalar_table(phi);
  const UnconstrainedMinimum opt = unconstrained_minimizer(ct);
  const double lambda = phi * phi;
  const double mu = 0.9 / (2.0 * lambda);
  const AllocatorRun run = run_apa(ct, 1.0, raw_options(mu, 20));
  const double ratio = 1.0 - 4.0 * mu * lambda;
  for (int t = 0; t < 20; ++t) {
    const double expected = -opt.coeffs.stream(0) * std::pow(ratio, t);
    CHECK(run.trajectory[static_cast<std::size_t>(t)].stream(0) - opt.coeffs.stream(0) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("step above the bound diverges") {
  const CouplingTable ct = scalar_table(1.0);
  CHECK_THROWS_AS(run_apa(ct, 1.0, raw_options(1.1, 200)), DivergenceError);
  try {
    run_apa(ct, 1.0, raw_options(1.1, 200));
  } catch (const DivergenceError& e) {
    CHECK(e.step_size() == 1.1);
    CHECK(std::string(e.what()).find("1.1") != std::string::npos);
  }
}

TEST_CASE("projection keeps the power constraint at every iterate") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const CouplingTable ct = random_table(30 + s, PrecoderKind::zf);
    AllocatorOptions o;
    o.total_power = 100.0;
    for (const AllocatorRun& run : {run_apa(ct, 1.0, o), run_apar(ct, 0.1, 1.0, o)}) {
      CHECK(run.trajectory.size() == 30);
      CHECK(run.mse_history.size() == 30);
      CHECK(run.trajectory.front().coeffs.cwiseAbs().maxCoeff() == 0.0);
      for (std::size_t t = 1; t < run.trajectory.size(); ++t) {
        CHECK(std::abs(run.trajectory[t].total_power() - 100.0) < 1e-10);
        CHECK(run.trajectory[t].coeffs.minCoeff() >= 0.0);
      }
    }
  }
}

TEST_CASE("robust allocator with zero error variance is the plain allocator") {
  const CouplingTable ct = random_table(40);
  AllocatorOptions o;
  o.total_power = 10.0;
  const AllocatorRun a = run_apa(ct, 1.0, o);
  const AllocatorRun b = run_apar(ct, 0.0, 1.0, o);
  for (std::size_t t = 0; t < a.trajectory.size(); ++t) CHECK(a.trajectory[t].coeffs == b.trajectory[t].coeffs);
}

TEST_CASE("fixed point and monotone descent without projection") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const CouplingTable ct = random_table(50 + s);
    const UnconstrainedMinimum opt = unconstrained_minimizer(ct);
    AllocatorOptions o;
    o.project = false;
    o.start = opt.coeffs;
    const AllocatorRun still = run_apa(ct, 1.0, o);
    CHECK((still.final().coeffs - opt.coeffs.coeffs).cwiseAbs().maxCoeff() < 1e-10);

    AllocatorOptions d;
    d.project = false;
    d.iterations = 100;
    const AllocatorRun run = run_apar(ct, 0.1, 1.0, d);
    for (std::size_t t = 1; t < run.mse_history.size(); ++t) CHECK(run.mse_history[t] <= run.mse_history[t - 1] + 1e-12);
  }
}

TEST_CASE("unprojected iterates converge to the closed-form minimizer") {
  const CouplingTable ct = random_table(60);
  AllocatorOptions o;
  o.project = false;
  o.iterations = 500;
  const AllocatorRun run = run_apa(ct, 1.0, o);
  CHECK((run.final().coeffs - unconstrained_minimizer(ct).coeffs.coeffs).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(run.converged);
}

TEST_CASE("projected allocator approaches the grid optimum of the objective") {
  Rng rng(70);
  const CMatrix h = rng.complex_normal_matrix(4, 4, 1.0);
  const PrecoderSet p = make_precoders(PrecoderKind::zf, h, 1.0, 10.0);
  const CouplingTable ct = build_coupling(h, p, ChannelSource::estimate);
  const double e_tr = 1.0;
  AllocatorOptions o;
  o.total_power = e_tr;
  o.iterations = 3000;
  const AllocatorRun run = run_apa(ct, 1.0, o);
  const Metric mse = [&](const PowerVector& a) { return mse_apa(a, ct, 1.0); };
  const FullSearchResult grid = grid_search_full(mse, 4, 0.01, e_tr, Goal::minimize, 5'000'000);
  CHECK(mse(run.final()) <= grid.value + 1e-3);
}

TEST_CASE("uniform allocation") {
  const PowerVector a = uniform_allocation(4, 4.0, 0.0);
  RVector expected(5);
  expected << 0, 1, 1, 1, 1;
  CHECK(a.coeffs == expected);
  const PowerVector b = uniform_allocation(4, 4.0, 1.0);
  CHECK(b.common() == doctest::Approx(2.0));
  CHECK(b.coeffs.tail(4).cwiseAbs().maxCoeff() == 0.0);
  for (const double d : {0.1, 0.37, 0.8}) CHECK(uniform_allocation(3, 7.0, d).total_power() == doctest::Approx(7.0));
  CHECK_THROWS_AS(uniform_allocation(3, 1.0, 1.5), DomainError);
  CHECK_THROWS_AS(uniform_allocation(3, 1.0, -0.1), DomainError);
}

TEST_CASE("random allocation") {
  std::set<double> firsts;
  for (const std::uint64_t seed : {1u, 2u, 3u}) {
    const PowerVector a = random_allocation(4, 10.0, seed);
    CHECK(a.total_power() == doctest::Approx(10.0));
    CHECK(a.coeffs.minCoeff() >= 0.0);
    CHECK(a.common_fraction() >= 0.0);
    CHECK(a.common_fraction() <= 1.0);
    CHECK(random_allocation(4, 10.0, seed).coeffs == a.coeffs);
    firsts.insert(a.coeffs(0));
  }
  CHECK(firsts.size() == 3);
}

TEST_CASE("delta search") {
  const Metric flat = [](const PowerVector&) { return 1.0; };
  const auto tie = grid_search_delta(2, 1.0, PrivateRule::uniform, 0.1, flat, Goal::maximize);
  CHECK(tie.delta == 0.0);

  const auto coarse = grid_search_delta(2, 1.0, PrivateRule::uniform, 0.5, flat, Goal::minimize);
  CHECK(coarse.evaluated_deltas == std::vector<double>{0.0, 0.5, 1.0});

  const Metric bowl = [](const PowerVector& a) {
    const double d = a.common() * a.common() / 2.0;
    return (d - 0.3) * (d - 0.3);
  };
  const auto best = grid_search_delta(3, 2.0, PrivateRule::uniform, 0.1, bowl, Goal::minimize);
  CHECK(best.delta == doctest::Approx(0.3));
  CHECK(best.coeffs.total_power() == doctest::Approx(2.0));

  const auto rnd = grid_search_delta(3, 2.0, PrivateRule::random, 0.1, bowl, Goal::minimize, 5);
  CHECK(rnd.delta == doctest::Approx(0.3));
  CHECK(rnd.coeffs.total_power() == doctest::Approx(2.0));

  CHECK_THROWS_AS(grid_search_delta(2, 1.0, PrivateRule::uniform, 0.6, flat, Goal::minimize), DomainError);
  CHECK_THROWS_AS(grid_search_delta(2, 1.0, PrivateRule::uniform, 0.0, flat, Goal::minimize), DomainError);
}

TEST_CASE("full grid counts and enumeration") {
  CHECK(full_grid_candidate_count(2, 0.25) == 15);
  CHECK(full_grid_candidate_count(1, 0.5) == 3);
  std::vector<double> seen;
  const Metric record = [&](const PowerVector& a) {
    seen.push_back(a.common() * a.common());
    return 0.0;
  };
  const FullSearchResult r = grid_search_full(record, 1, 0.5, 1.0, Goal::maximize);
  CHECK(r.candidates == 3);
  REQUIRE(seen.size() == 3);
  CHECK(seen[0] == doctest::Approx(0.0));
  CHECK(seen[1] == doctest::Approx(0.5));
  CHECK(seen[2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(grid_search_full(record, 8, 0.01, 1.0, Goal::maximize, 1000), ConfigError);
}
