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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsapa/model.hpp"
#include "rsapa/precoders.hpp"
#include "rsapa/rates.hpp"

namespace rsapa {

struct ExperimentSpec {
  SystemConfig scenario;
  PrecoderKind precoder = PrecoderKind::zf;
  std::vector<Scheme> schemes;
  std::vector<double> snr_grid_db{0, 5, 10, 15, 20, 25, 30};
  std::vector<double> err_var_grid{0.0, 0.05, 0.1, 0.2};
  EvaluationOptions eval;
  // Applied to every adaptive scheme when set.
  std::optional<double> step_size;
  int iterations = 30;
  std::vector<int> complexity_n{2, 4, 8, 16, 32};
  std::string output_path = "-";

  // Throws ConfigError on empty grids, duplicate labels, or bad counts.
  void validate() const;
};

// Scenario of N_t = 4, two users with two antennas and two streams each, ZF,
// sigma_e^2 = 0.1, schemes conventional-upa, rs-es-upa, rs-apa, rs-apa-r.
ExperimentSpec default_spec();

// `key = value` lines; lists are comma separated; `#` starts a comment.
// Unknown keys and malformed values throw ConfigError naming the line.
void apply_config_text(ExperimentSpec& spec, std::string_view text);
void apply_config_file(ExperimentSpec& spec, const std::filesystem::path& path);

// Setters shared by the file parser and the command line.
void set_schemes(ExperimentSpec& spec, const std::vector<std::string>& names);
std::vector<double> parse_real_list(std::string_view text);

}  // namespace rsapa
