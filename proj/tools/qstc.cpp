// Copyright 2026 The qstc Authors. All rights reserved.
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

// qstc: command-line front end for the transfer-control experiments.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qstc/error.hpp"
#include "qstc/experiment.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> workers;
  std::vector<std::string> set;
};

void add_common(CLI::App* cmd, Common& c, bool with_run_flags) {
  cmd->add_option("-c,--config", c.config, "JSON config file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", c.set, "override a config field (a.b=value)")
      ->allow_extra_args(false);
  if (!with_run_flags) return;
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("-o,--out", c.out, "output directory");
  cmd->add_option("-w,--workers", c.workers, "worker threads (0 = all cores)");
}

qstc::CliOverrides overrides_of(const Common& c) {
  qstc::CliOverrides o;
  o.seed = c.seed;
  o.output_dir = c.out;
  o.workers = c.workers;
  o.assignments = c.set;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum state transfer control: GA and DQN experiments"};
  app.require_subcommand(1);

  struct Entry {
    qstc::Mode mode;
    const char* help;
  };
  const Entry entries[] = {
      {qstc::Mode::kGa, "design a control sequence with the genetic algorithm"},
      {qstc::Mode::kDqnTrain, "train a deep Q-network agent"},
      {qstc::Mode::kValidate, "evaluate a controller on the noise grid"},
      {qstc::Mode::kSweep, "GA sweep over field strength and time step"},
      {qstc::Mode::kHistogram, "action frequencies of good GA solutions"},
      {qstc::Mode::kScaling, "multi-seed GA over chain lengths"},
      {qstc::Mode::kBaseline, "free evolution without control"},
      {qstc::Mode::kHpo, "random search over DQN hyperparameters"},
  };

  Common common;
  std::vector<std::pair<CLI::App*, qstc::Mode>> run_cmds;
  for (const Entry& e : entries) {
    CLI::App* cmd =
        app.add_subcommand(std::string(qstc::to_string(e.mode)), e.help);
    add_common(cmd, common, true);
    run_cmds.emplace_back(cmd, e.mode);
  }
  CLI::App* describe_cmd =
      app.add_subcommand("describe", "print the fully resolved config");
  add_common(describe_cmd, common, true);
  std::string describe_mode;
  describe_cmd->add_option("--mode", describe_mode,
                           "mode to resolve (default: the file's mode key)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qstc::kExitConfigError;
  }

  if (describe_cmd->parsed()) {
    try {
      std::optional<qstc::Mode> mode;
      if (!describe_mode.empty()) mode = qstc::parse_mode(describe_mode);
      const qstc::ExperimentConfig config = qstc::load_experiment_config(
          common.config, mode, overrides_of(common));
      std::cout << qstc::describe(config);
      return qstc::kExitOk;
    } catch (const qstc::ConfigError& e) {
      std::cerr << "config error [" << e.field() << "]: " << e.what() << '\n';
      return qstc::kExitConfigError;
    }
  }

  for (const auto& [cmd, mode] : run_cmds) {
    if (cmd->parsed()) {
      return qstc::run_cli(mode, common.config, overrides_of(common),
                           std::clog, std::cerr);
    }
  }
  return qstc::kExitFailure;
}
