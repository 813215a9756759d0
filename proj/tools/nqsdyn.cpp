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


// nqsdyn command-line frontend.
//
//   nqsdyn ground-state --config run.ini [--output DIR] [--checkpoint PATH]
//   nqsdyn spectrum     --config run.ini [--checkpoint PATH] [--workers N]
//   nqsdyn ed           --config run.ini
//   nqsdyn compare      --config run.ini CANDIDATE.csv ORACLE.csv [--first-order PATH]
//
// Exit codes: 0 success, 1 failed comparison or internal error,
// 2 validation error, 3 convergence failure, 4 oracle cap exceeded.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nqsdyn/pipeline.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string checkpoint;
  std::string output;
  int workers = 1;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App *cmd, CommonFlags &flags) {
  cmd->add_option("--config", flags.config, "INI run configuration")->required();
  cmd->add_option("--checkpoint", flags.checkpoint, "Checkpoint path (default: output dir)");
  cmd->add_option("--output", flags.output, "Output directory (overrides output.directory)");
  cmd->add_option("--workers", flags.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", flags.seed, "Overrides rbm.seed and sampler.seed");
}

nqsdyn::RunOptions to_options(const CommonFlags &flags) {
  nqsdyn::RunOptions options;
  if (!flags.checkpoint.empty()) options.checkpoint = flags.checkpoint;
  if (!flags.output.empty()) options.output = flags.output;
  options.workers = flags.workers;
  options.seed = flags.seed;
  return options;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Variational RBM ground states and dynamical structure factors"};
  app.require_subcommand(1);
  CommonFlags flags;
  auto *gs = app.add_subcommand("ground-state", "Optimize the RBM ground state");
  auto *spectrum = app.add_subcommand("spectrum", "Correction-vector frequency sweep");
  auto *ed = app.add_subcommand("ed", "Exact spectrum from the oracle");
  auto *compare = app.add_subcommand("compare", "Compare a spectrum with the oracle");
  for (auto *cmd : {gs, spectrum, ed, compare}) add_common(cmd, flags);
  std::string candidate, oracle, first_order;
  compare->add_option("candidate", candidate, "Spectrum CSV to check")->required();
  compare->add_option("oracle", oracle, "Oracle spectrum CSV")->required();
  compare->add_option("--first-order", first_order, "First-order spectrum CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const nqsdyn::RunConfig config = nqsdyn::load_config(flags.config);
    const nqsdyn::RunOptions options = to_options(flags);
    if (gs->parsed()) {
      nqsdyn::cmd_ground_state(config, options, std::cout);
    } else if (spectrum->parsed()) {
      nqsdyn::cmd_spectrum(config, options, std::cout);
    } else if (ed->parsed()) {
      nqsdyn::cmd_ed(config, options, std::cout);
    } else {
      std::optional<std::filesystem::path> first;
      if (!first_order.empty()) first = first_order;
      const auto report =
          nqsdyn::cmd_compare(config, options, candidate, oracle, first, std::cout);
      return report.pass ? 0 : 1;
    }
  } catch (const nqsdyn::ValidationError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nqsdyn::ContractViolation &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nqsdyn::ConvergenceError &e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const nqsdyn::OracleCapError &e) {
    std::cerr << "oracle cap: " << e.what() << "\n";
    return 4;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
