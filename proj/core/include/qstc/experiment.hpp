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

#ifndef QSTC_EXPERIMENT_HPP_
#define QSTC_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qstc/actions.hpp"
#include "qstc/chain.hpp"
#include "qstc/dqn.hpp"
#include "qstc/ga.hpp"
#include "qstc/harness.hpp"

namespace qstc {

enum class Mode {
  kGa,
  kDqnTrain,
  kValidate,
  kSweep,
  kHistogram,
  kScaling,
  kBaseline,
  kHpo,
};

std::string_view to_string(Mode mode);
// Throws ConfigError("mode", ...) for an unknown name.
Mode parse_mode(std::string_view text);

// Bumped whenever a CSV column set changes; recorded in every manifest.
inline constexpr int kCsvSchemaVersion = 1;

struct ValidateSettings {
  std::string controller = "ga";  // "ga" or "dqn"
  // Optional JSON produced by the `ga` / `dqn-train` modes (or a bare
  // {"sequence": [...]} / network file). Empty: design the controller first.
  std::string source;
};

struct HistogramSettings {
  int n_sequences = 1000;
  double threshold = 0.99;
  int max_runs = 200;
};

struct HpoSettings {
  int trials = 32;
  int train_episodes = 20000;
  int val_episodes = 100;
  double noise_p = 0.25;
  double noise_delta = 0.25;
  SearchRanges ranges;
};

// Fully resolved experiment description. See docs/config.md for the file
// schema; to_json() emits a document that parses back to the same value.
struct ExperimentConfig {
  Mode mode = Mode::kBaseline;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  int workers = 1;

  ChainSpec chain;
  std::optional<int> n_steps;  // unset: transfer_steps(n, dt)
  ActionSetKind action_set = ActionSetKind::kSiteBySite;

  GaConfig ga;
  DqnConfig dqn;
  int dqn_seeds = 1;

  NoiseGrid noise_grid;
  int validation_runs = 100;
  ValidateSettings validate;

  std::vector<double> sweep_h_values;
  std::vector<double> sweep_dt_values;
  HistogramSettings histogram;
  std::vector<int> lengths;  // scaling study
  HpoSettings hpo;

  int resolved_n_steps() const;
  nlohmann::json to_json() const;
};

// Validates `doc` against the schema. Unknown keys, wrong types and
// out-of-range values raise ConfigError naming the dotted field path. When
// `mode` is given and the document also has a "mode" key, they must agree.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc,
                                         std::optional<Mode> mode);

// Applies "dotted.key=value". The value is parsed as JSON when possible and
// taken as a string otherwise.
void apply_override(nlohmann::json& doc, std::string_view assignment);

struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<int> workers;
  std::vector<std::string> assignments;  // --set key=value, in order
};

ExperimentConfig load_experiment_config(const std::filesystem::path& path,
                                        std::optional<Mode> mode,
                                        const CliOverrides& overrides);

// Resolved configuration as pretty JSON, including derived values (n_steps,
// hidden2, reward table, epsilon schedule).
std::string describe(const ExperimentConfig& config);

struct RunResult {
  int exit_code = 0;
  std::string status = "ok";  // "ok" or "partial"
  std::vector<std::filesystem::path> artifacts;
};

// Exit codes used by run_cli().
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitPartial = 3;

// Executes the configured mode, writing CSV/JSON artifacts and manifest.json
// into output_dir. Progress goes to `log`.
RunResult run_experiment(const ExperimentConfig& config, std::ostream& log,
                         const std::vector<std::filesystem::path>& inputs = {});

// Load + run with machine-readable error reporting: on failure a JSON error
// record is printed to `err` (and written to <out>/error.json when possible).
int run_cli(Mode mode, const std::filesystem::path& config_path,
            const CliOverrides& overrides, std::ostream& log,
            std::ostream& err);

}  // namespace qstc

#endif  // QSTC_EXPERIMENT_HPP_
