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

#include "rsapa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <locale>
#include <sstream>

#include "rsapa/complexity.hpp"
#include "rsapa/errors.hpp"
#include "rsapa/objective.hpp"
#include "rsapa/precoders.hpp"
#include "rsapa/rng.hpp"

namespace rsapa {

namespace {

std::ostringstream csv_stream() {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(12);
  return os;
}

SystemConfig at_point(const ExperimentSpec& spec, double snr_db, double err_var) {
  SystemConfig c = spec.scenario;
  c.total_power = snr_db_to_total_power(snr_db, c.noise_var);
  c.err_var = err_var;
  return c;
}

void append_rows(std::vector<SweepRow>& rows, const std::vector<RateReport>& reports, double snr_db, double err_var,
                 std::uint64_t seed) {
  for (const RateReport& r : reports) {
    if (r.n_channel_draws == 0) {
      throw NumericalError("scheme " + r.label + ": every channel draw failed (singular precoder or divergence)");
    }
    SweepRow row;
    row.snr_db = snr_db;
    row.err_var = err_var;
    row.scheme = r.label;
    row.esr = r.ergodic_sum_rate;
    row.common_term = r.common_term;
    row.private_sum = r.private_sum;
    row.ac_sq_fraction = r.ac_sq_fraction;
    row.n_channels = r.n_channel_draws;
    row.n_errors = r.n_error_draws;
    row.seed = seed;
    rows.push_back(std::move(row));
  }
}

}  // namespace

std::vector<Scheme> resolved_schemes(const ExperimentSpec& spec) {
  std::vector<Scheme> out = spec.schemes;
  for (Scheme& s : out) {
    if (!is_adaptive(s.kind)) continue;
    s.iterations = spec.iterations;
    if (spec.step_size) s.step_size = spec.step_size;
  }
  return out;
}

std::vector<SweepRow> run_snr_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const auto schemes = resolved_schemes(spec);
  std::vector<SweepRow> rows;
  for (const double snr : spec.snr_grid_db) {
    const SystemConfig c = at_point(spec, snr, spec.scenario.err_var);
    append_rows(rows, evaluate_schemes(c, spec.precoder, schemes, spec.eval), snr, c.err_var, c.master_seed);
  }
  return rows;
}

std::vector<SweepRow> run_error_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const auto schemes = resolved_schemes(spec);
  const double snr = spec.snr_grid_db.front();
  std::vector<SweepRow> rows;
  for (const double ev : spec.err_var_grid) {
    const SystemConfig c = at_point(spec, snr, ev);
    append_rows(rows, evaluate_schemes(c, spec.precoder, schemes, spec.eval), snr, ev, c.master_seed);
  }
  return rows;
}

std::vector<ConvergenceRow> run_convergence(const ExperimentSpec& spec) {
  spec.validate();
  const double snr = spec.snr_grid_db.front();
  const SystemConfig c = at_point(spec, snr, spec.scenario.err_var);
  std::vector<ConvergenceRow> rows;
  bool any = false;
  for (const Scheme& s : resolved_schemes(spec)) {
    if (!is_adaptive(s.kind)) continue;
    any = true;
    for (const ConvergencePoint& p : convergence_trace(c, spec.precoder, s, spec.eval)) {
      rows.push_back({p.iteration, s.label, p.mean_objective, p.esr, p.ac_sq_fraction, snr, c.err_var});
    }
  }
  if (!any) throw ConfigError("convergence needs at least one adaptive scheme (rs-apa or rs-apa-r)");
  return rows;
}

std::vector<ComplexityRow> run_complexity_table(const std::vector<int>& n_grid, int iterations, double grid_step,
                                                bool measure, std::uint64_t seed) {
  if (n_grid.empty()) throw ConfigError("complexity grid is empty");
  std::vector<ComplexityRow> rows;
  for (const int n : n_grid) {
    IterationTiming timing;
    if (measure) timing = measure_iteration_cost(n, 15, seed);
    for (const Algorithm a : {Algorithm::apa, Algorithm::apar, Algorithm::es_sdma, Algorithm::es_rs}) {
      const FlopReport f = flop_report(a, n, iterations, grid_step);
      ComplexityRow row;
      row.n = n;
      row.scheme = to_string(a);
      row.flops_per_iteration = f.flops_per_iteration;
      row.iterations = f.iterations;
      row.total_flops = f.total;
      row.big_o = f.big_o;
      if (measure && (a == Algorithm::apa || a == Algorithm::apar)) {
        row.first_iteration_s = timing.first_iteration;
        row.cached_iteration_s = timing.cached_iteration;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  auto os = csv_stream();
  os << "snr_db,err_var,scheme,esr,common_term,private_sum,ac_sq_fraction,n_channels,n_errors,seed\n";
  for (const SweepRow& r : rows) {
    os << r.snr_db << ',' << r.err_var << ',' << r.scheme << ',' << r.esr << ',' << r.common_term << ','
       << r.private_sum << ',' << r.ac_sq_fraction << ',' << r.n_channels << ',' << r.n_errors << ',' << r.seed << '\n';
  }
  return os.str();
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  auto os = csv_stream();
  os << "iteration,scheme,objective,esr,ac_sq_fraction,snr_db,err_var\n";
  for (const ConvergenceRow& r : rows) {
    os << r.iteration << ',' << r.scheme << ',' << r.objective << ',' << r.esr << ',' << r.ac_sq_fraction << ','
       << r.snr_db << ',' << r.err_var << '\n';
  }
  return os.str();
}

std::string complexity_csv(const std::vector<ComplexityRow>& rows) {
  auto os = csv_stream();
  os << "n,scheme,flops_per_iteration,iterations,total_flops,big_o,wallclock_first_iteration_s,"
        "wallclock_cached_iteration_s\n";
  for (const ComplexityRow& r : rows) {
    os << r.n << ',' << r.scheme << ',' << r.flops_per_iteration << ',' << r.iterations << ',' << r.total_flops << ",\""
       << r.big_o << "\"," << r.first_iteration_s << ',' << r.cached_iteration_s << '\n';
  }
  return os.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed to write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing " + path);
}

std::vector<ValidationCheck> run_validation(int instances, int oracle_draws, std::uint64_t seed) {
  if (instances < 1 || oracle_draws < 1) throw ConfigError("validation needs positive counts");
  const int n = 4;
  const double noise_var = 1.0;
  double worst_grad = 0.0;
  double worst_reduction = 0.0;
  double worst_z = 0.0;
  double min_curvature = std::numeric_limits<double>::infinity();
  for (int i = 0; i < instances; ++i) {
    Rng rng(seed, Stream::oracle, static_cast<std::uint64_t>(i));
    const CMatrix h = rng.complex_normal_matrix(n, n, 1.0);
    const PrecoderSet p = make_precoders(PrecoderKind::mf, h, noise_var, 10.0);
    const CouplingTable ct = build_coupling(h, p, ChannelSource::estimate);
    PowerVector a(n);
    for (Eigen::Index k = 0; k < a.coeffs.size(); ++k) a.coeffs(k) = rng.uniform();
    for (const double ev : {0.0, 0.1}) {
      const RVector g = grad_apar(a, ct, ev);
      for (Eigen::Index k = 0; k < g.size(); ++k) {
        const double h_step = 1e-6;
        PowerVector up = a, down = a;
        up.coeffs(k) += h_step;
        down.coeffs(k) -= h_step;
        const double fd = (mse_apar(up, ct, ev, noise_var) - mse_apar(down, ct, ev, noise_var)) / (2.0 * h_step);
        worst_grad = std::max(worst_grad, std::abs(fd - g(k)) / std::max(1.0, std::abs(g(k))));
      }
      min_curvature = std::min(min_curvature, separable_form(ct, ev, noise_var).curvature.minCoeff());
    }
    worst_reduction = std::max(worst_reduction, std::abs(mse_apar(a, ct, 0.0, noise_var) - mse_apa(a, ct, noise_var)));
    if (i < 5) {
      const OracleEstimate o = mse_oracle(a, h, p, noise_var, 0.0, oracle_draws, seed + static_cast<std::uint64_t>(i));
      worst_z = std::max(worst_z, std::abs(o.mean - mse_apa(a, ct, noise_var)) / o.std_error);
      const OracleEstimate r = mse_oracle(a, h, p, noise_var, 0.1, oracle_draws, seed + 1000 + static_cast<std::uint64_t>(i));
      worst_z = std::max(worst_z, std::abs(r.mean - mse_apar(a, ct, 0.1, noise_var)) / r.std_error);
    }
  }
  auto fmt = [](const char* label, double v) {
    auto os = csv_stream();
    os << label << '=' << v;
    return os.str();
  };
  return {
      {"gradient-finite-difference", worst_grad < 1e-6, fmt("max_rel_err", worst_grad)},
      {"closed-form-vs-monte-carlo", worst_z < 4.0, fmt("max_abs_z", worst_z)},
      {"robust-reduces-to-plain", worst_reduction < 1e-9, fmt("max_abs_diff", worst_reduction)},
      {"strict-convexity", min_curvature > 0.0, fmt("min_curvature", min_curvature)},
  };
}

}  // namespace rsapa
