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

#include "rsapa/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "rsapa/errors.hpp"

namespace rsapa {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

double parse_real(std::string_view s) {
  double v = 0.0;
  const auto t = trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view s) {
  Int v = 0;
  const auto t = trim(s);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<int> parse_int_list(std::string_view s) {
  std::vector<int> out;
  for (auto item : split_list(s)) out.push_back(parse_int<int>(item));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

bool parse_bool(std::string_view s) {
  const auto t = trim(s);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("expected a boolean, got '" + std::string(s) + "'");
}

void apply_key(ExperimentSpec& spec, std::string_view key, std::string_view value) {
  SystemConfig& c = spec.scenario;
  if (key == "n_tx") c.n_tx = parse_int<int>(value);
  else if (key == "users") c.users = parse_int<int>(value);
  else if (key == "rx_antennas_per_user") c.rx_antennas_per_user = parse_int_list(value);
  else if (key == "streams_per_user") c.streams_per_user = parse_int_list(value);
  else if (key == "noise_var") c.noise_var = parse_real(value);
  else if (key == "err_var") c.err_var = parse_real(value);
  else if (key == "seed") c.master_seed = parse_int<std::uint64_t>(value);
  else if (key == "precoder") spec.precoder = parse_precoder_kind(trim(value));
  else if (key == "schemes") {
    std::vector<std::string> names;
    for (auto item : split_list(value)) names.emplace_back(item);
    set_schemes(spec, names);
  }
  else if (key == "snr_db") spec.snr_grid_db = parse_real_list(value);
  else if (key == "err_var_grid") spec.err_var_grid = parse_real_list(value);
  else if (key == "channels") spec.eval.n_channels = parse_int<int>(value);
  else if (key == "errors") spec.eval.n_errors = parse_int<int>(value);
  else if (key == "search_draws") spec.eval.search_draws = parse_int<int>(value);
  else if (key == "jobs") spec.eval.jobs = parse_int<int>(value);
  else if (key == "literal_numerator") spec.eval.literal_numerator = parse_bool(value);
  else if (key == "mu") spec.step_size = parse_real(value);
  else if (key == "iterations") spec.iterations = parse_int<int>(value);
  else if (key == "complexity_n") spec.complexity_n = parse_int_list(value);
  else if (key == "out") spec.output_path = std::string(trim(value));
  else throw ConfigError("unknown key '" + std::string(key) + "'");
}

}  // namespace

std::vector<double> parse_real_list(std::string_view text) {
  std::vector<double> out;
  for (auto item : split_list(text)) out.push_back(parse_real(item));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

void set_schemes(ExperimentSpec& spec, const std::vector<std::string>& names) {
  spec.schemes.clear();
  for (const auto& n : names) spec.schemes.push_back(make_scheme(n));
}

void ExperimentSpec::validate() const {
  scenario.validate();
  if (schemes.empty()) throw ConfigError("no schemes selected");
  if (snr_grid_db.empty()) throw ConfigError("SNR grid is empty");
  if (err_var_grid.empty()) throw ConfigError("error-variance grid is empty");
  for (double e : err_var_grid) {
    if (!(e >= 0.0 && e < 1.0)) throw ConfigError("error variances must lie in [0, 1)");
  }
  if (eval.n_channels < 1 || eval.n_errors < 1) throw ConfigError("channels and errors must be at least 1");
  if (eval.jobs < 1) throw ConfigError("jobs must be at least 1");
  if (iterations < 1) throw ConfigError("iterations must be at least 1");
  if (step_size && !(*step_size > 0.0)) throw ConfigError("mu must be positive");
  std::set<std::string> labels;
  for (const auto& s : schemes) {
    if (!labels.insert(s.label).second) throw ConfigError("duplicate scheme label '" + s.label + "'");
  }
  for (int n : complexity_n) {
    if (n < 1) throw ConfigError("complexity sizes must be positive");
  }
}

ExperimentSpec default_spec() {
  ExperimentSpec spec;
  set_schemes(spec, {"conventional-upa", "rs-es-upa", "rs-apa", "rs-apa-r"});
  return spec;
}

void apply_config_text(ExperimentSpec& spec, std::string_view text) {
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_key(spec, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

void apply_config_file(ExperimentSpec& spec, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(spec, ss.str());
}

}  // namespace rsapa
