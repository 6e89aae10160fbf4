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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rsapa/config.hpp"
#include "rsapa/errors.hpp"
#include "rsapa/harness.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumerical = 2, kIo = 3 };

struct Flags {
  std::optional<std::string> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> channels;
  std::optional<int> errors;
  std::optional<std::string> precoder;
  std::vector<std::string> schemes;
  std::optional<std::string> snr_db;
  std::optional<std::string> err_var;
  std::optional<double> mu;
  std::optional<int> iters;
  std::optional<int> jobs;
  bool literal_numerator = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key = value experiment file");
  cmd->add_option("--seed", f.seed, "master seed");
  cmd->add_option("--out", f.out, "output CSV path ('-' for stdout)");
  cmd->add_option("--channels", f.channels, "outer channel draws");
  cmd->add_option("--errors", f.errors, "inner CSIT-error draws per channel");
  cmd->add_option("--precoder", f.precoder, "mf | zf | mmse");
  cmd->add_option("--scheme", f.schemes, "scheme name (repeatable)");
  cmd->add_option("--snr-db", f.snr_db, "SNR grid in dB, comma separated");
  cmd->add_option("--err-var", f.err_var, "error variance (grid for sweep-err), comma separated");
  cmd->add_option("--mu", f.mu, "fixed step size for adaptive schemes");
  cmd->add_option("--iters", f.iters, "adaptive iterations");
  cmd->add_option("--jobs", f.jobs, "worker threads");
  cmd->add_flag("--literal-numerator", f.literal_numerator, "desired-signal term on the estimate");
}

rsapa::ExperimentSpec build_spec(const Flags& f, bool err_is_grid) {
  rsapa::ExperimentSpec spec = rsapa::default_spec();
  if (f.config) rsapa::apply_config_file(spec, *f.config);
  if (f.seed) spec.scenario.master_seed = *f.seed;
  if (f.out) spec.output_path = *f.out;
  if (f.channels) spec.eval.n_channels = *f.channels;
  if (f.errors) spec.eval.n_errors = *f.errors;
  if (f.precoder) spec.precoder = rsapa::parse_precoder_kind(*f.precoder);
  if (!f.schemes.empty()) rsapa::set_schemes(spec, f.schemes);
  if (f.snr_db) spec.snr_grid_db = rsapa::parse_real_list(*f.snr_db);
  if (f.err_var) {
    const auto list = rsapa::parse_real_list(*f.err_var);
    if (err_is_grid) {
      spec.err_var_grid = list;
    } else {
      if (list.size() != 1) throw rsapa::ConfigError("--err-var takes a single value here");
      spec.scenario.err_var = list.front();
    }
  }
  if (f.mu) spec.step_size = *f.mu;
  if (f.iters) spec.iterations = *f.iters;
  if (f.jobs) spec.eval.jobs = *f.jobs;
  if (f.literal_numerator) spec.eval.literal_numerator = true;
  spec.validate();
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate-splitting MU-MIMO power allocation experiments"};
  app.require_subcommand(1);
  Flags f;
  auto* snr = app.add_subcommand("sweep-snr", "ergodic sum rate versus SNR");
  auto* err = app.add_subcommand("sweep-err", "ergodic sum rate versus CSIT error variance");
  auto* conv = app.add_subcommand("convergence", "objective and sum rate per iteration");
  auto* cplx = app.add_subcommand("complexity", "FLOP model and per-iteration timings");
  auto* val = app.add_subcommand("validate", "gradient and closed-form checks");
  for (auto* c : {snr, err, conv, cplx, val}) add_common(c, f);
  bool no_timing = false;
  std::string n_grid;
  cplx->add_flag("--no-timing", no_timing, "skip wall-clock measurements");
  cplx->add_option("--n", n_grid, "matrix sizes, comma separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*snr) {
      const auto spec = build_spec(f, false);
      rsapa::write_output(spec.output_path, rsapa::sweep_csv(rsapa::run_snr_sweep(spec)));
    } else if (*err) {
      const auto spec = build_spec(f, true);
      rsapa::write_output(spec.output_path, rsapa::sweep_csv(rsapa::run_error_sweep(spec)));
    } else if (*conv) {
      const auto spec = build_spec(f, false);
      rsapa::write_output(spec.output_path, rsapa::convergence_csv(rsapa::run_convergence(spec)));
    } else if (*cplx) {
      auto spec = build_spec(f, false);
      std::vector<int> sizes = spec.complexity_n;
      if (!n_grid.empty()) {
        sizes.clear();
        for (double v : rsapa::parse_real_list(n_grid)) sizes.push_back(static_cast<int>(v));
      }
      const auto rows = rsapa::run_complexity_table(sizes, spec.iterations, 0.01, !no_timing, spec.scenario.master_seed);
      rsapa::write_output(spec.output_path, rsapa::complexity_csv(rows));
    } else if (*val) {
      const auto spec = build_spec(f, false);
      const int instances = f.channels.value_or(100);
      const int draws = f.errors.value_or(100000);
      bool all = true;
      std::string text;
      for (const auto& c : rsapa::run_validation(instances, draws, spec.scenario.master_seed)) {
        text += (c.passed ? "PASS " : "FAIL ") + c.name + " " + c.detail + "\n";
        all = all && c.passed;
      }
      rsapa::write_output(spec.output_path, text);
      return all ? kOk : kNumerical;
    }
  } catch (const rsapa::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const rsapa::DomainError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const rsapa::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const rsapa::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  }
  return kOk;
}
