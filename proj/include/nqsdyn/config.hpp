// Copyright 2026 The nqsdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef NQSDYN_CONFIG_HPP
#define NQSDYN_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nqsdyn/cv_solver.hpp"
#include "nqsdyn/ed.hpp"

namespace nqsdyn {

struct SweepConfig {
  double omega_min = 0.0;
  double omega_max = 3.0;
  double omega_step = 0.05;
  double eta = 0.1;
  int source_site = 0;
  std::vector<int> k_indices;  // empty: all 0..L-1
  int block_size = 4;          // contiguous frequencies sharing warm starts

  friend bool operator==(const SweepConfig &, const SweepConfig &) = default;
};

struct CompareConfig {
  double l2_tolerance = 0.15;
  double peak_tolerance = 0.05;
  double zero_k_fraction = 0.01;
  double negative_fraction = 0.02;

  friend bool operator==(const CompareConfig &, const CompareConfig &) = default;
};

/// Everything a run needs. Stored as INI text: [section] blocks of
/// key = value lines, addressed as section.key.
struct RunConfig {
  ModelSpec model;
  int n_hidden = 0;  // 0: 4 L
  double init_scale = 0.01;
  std::uint64_t rbm_seed = 1;
  SamplingMode sampling_mode = SamplingMode::kMonteCarlo;
  SamplerPlan sampler;
  SrSettings sr;
  CvSettings cv;
  SweepConfig sweep;
  OracleLimits oracle;
  CompareConfig compare;
  std::filesystem::path output_directory = "run";
  std::string checkpoint_name = "ground_state.ckpt";

  int hidden_units() const { return n_hidden > 0 ? n_hidden : 4 * model.length; }
  std::vector<int> momenta() const;
  SamplingOptions sampling() const { return {sampling_mode, sampler}; }
  void validate() const;

  friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

/// Parses INI text. Unknown keys, missing required keys (model.length,
/// model.j1, model.j2) and malformed values raise ValidationError naming
/// the key.
RunConfig parse_config(const std::string &text);
RunConfig load_config(const std::filesystem::path &path);

/// Canonical INI text; parse_config(format_config(c)) == c.
std::string format_config(const RunConfig &config);

}  // namespace nqsdyn

#endif  // NQSDYN_CONFIG_HPP
