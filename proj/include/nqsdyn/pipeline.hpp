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


#ifndef NQSDYN_PIPELINE_HPP
#define NQSDYN_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nqsdyn/config.hpp"
#include "nqsdyn/greens.hpp"

namespace nqsdyn {

/// Command-line overrides shared by all subcommands.
struct RunOptions {
  std::optional<std::filesystem::path> checkpoint;
  std::optional<std::filesystem::path> output;
  int workers = 1;
  std::optional<std::uint64_t> seed;
};

/// Config with the overrides applied (--output, --seed).
RunConfig apply_overrides(RunConfig config, const RunOptions &options);
std::filesystem::path checkpoint_path(const RunConfig &config, const RunOptions &options);

struct GroundStateOutcome {
  GroundStateResult result;
  std::filesystem::path checkpoint;
};

/// Optimizes the RBM, writes the checkpoint (with E0), energy_trace.csv,
/// manifest.json and timings.json.
GroundStateOutcome cmd_ground_state(const RunConfig &config, const RunOptions &options,
                                    std::ostream &log);

/// One frequency of a sweep.
struct FrequencyResult {
  double omega = 0.0;
  std::vector<GreensEstimates> estimates;  // per separation
  Complex beta_plus{0.0, 0.0};
  Complex beta_minus{0.0, 0.0};
  double x_plus = 0.0;
  double x_minus = 0.0;
  int iterations_plus = 0;
  int iterations_minus = 0;
  bool converged = false;
  std::string failure;  // non-empty when the point could not be evaluated
};

struct SpectrumOutcome {
  SpectrumTable combined;     // second-order combination
  SpectrumTable first_order;  // first-order combination
  SpectrumTable uncorrected;  // <A|chi+> alone
  std::vector<FrequencyResult> frequencies;
  double non_converged_fraction = 0.0;
};

/// Correction-vector sweep over the configured grid for a ground-state
/// psi with energy e0. Frequencies are split into blocks of
/// sweep.block_size; warm starts never cross a block boundary, so the
/// result does not depend on `workers`.
SpectrumOutcome compute_spectrum(const RunConfig &config, const RbmParameters &psi, double e0,
                                 int workers);

/// compute_spectrum from the checkpoint, writes spectrum.csv,
/// spectrum_first_order.csv, spectrum_uncorrected.csv, manifest.json and
/// timings.json. More than 25% non-converged points raise ConvergenceError
/// after the files are written.
SpectrumOutcome cmd_spectrum(const RunConfig &config, const RunOptions &options,
                             std::ostream &log);

/// Exact spectrum on the configured grid; writes oracle.csv and manifest.json.
SpectrumTable cmd_ed(const RunConfig &config, const RunOptions &options, std::ostream &log);

struct MomentumComparison {
  int k_index = 0;
  double oracle_max = 0.0;
  double relative_l2 = 0.0;
  double absolute_l2 = 0.0;
  bool has_peak = false;  // oracle weight above 1e-3 of the global maximum
  double oracle_peak = 0.0;
  double peak = 0.0;
  double peak_delta = 0.0;
  SumRuleCheck sum_rule;
  // Only with a first-order table: errors at the oracle peak frequency.
  double first_order_peak_error = 0.0;
  double second_order_peak_error = 0.0;
};

struct ComparisonReport {
  std::vector<MomentumComparison> momenta;
  double global_max = 0.0;
  double zero_k_max = 0.0;   // max |S(k=0, omega)|, 0 when k = 0 is absent
  double min_value = 0.0;    // most negative S over the table
  bool has_first_order = false;
  bool l2_pass = false;
  bool peaks_pass = false;
  bool sum_rule_pass = false;
  bool symmetry_pass = false;
  bool second_order_pass = true;
  bool pass = false;
};

/// Compares a spectrum with the oracle on the same grid. Poles for the sum
/// rule come from the oracle for config.model.
ComparisonReport compare_spectra(const SpectrumTable &candidate, const SpectrumTable &oracle,
                                 const RunConfig &config,
                                 const std::optional<SpectrumTable> &first_order = std::nullopt);

std::string format_report(const ComparisonReport &report);

/// Reads both tables, writes compare.json to the output directory and
/// prints the report.
ComparisonReport cmd_compare(const RunConfig &config, const RunOptions &options,
                             const std::filesystem::path &candidate,
                             const std::filesystem::path &oracle,
                             const std::optional<std::filesystem::path> &first_order,
                             std::ostream &log);

}  // namespace nqsdyn

#endif  // NQSDYN_PIPELINE_HPP
