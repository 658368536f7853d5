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

#include "qstc/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "qstc/error.hpp"
#include "qstc/evolution.hpp"
#include "qstc/io.hpp"

namespace qstc {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr std::pair<Mode, std::string_view> kModeNames[] = {
    {Mode::kGa, "ga"},           {Mode::kDqnTrain, "dqn-train"},
    {Mode::kValidate, "validate"}, {Mode::kSweep, "sweep"},
    {Mode::kHistogram, "histogram"}, {Mode::kScaling, "scaling"},
    {Mode::kBaseline, "baseline"}, {Mode::kHpo, "hpo"},
};

// Walks one JSON object, tracking which keys were read so that leftovers can
// be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string field(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  bool has(std::string_view key) const {
    return j_.contains(std::string(key)) && !j_.at(std::string(key)).is_null();
  }

  template <typename T>
  void get(std::string_view key, T& out) {
    seen_.insert(std::string(key));
    if (!has(key)) return;
    convert(key, out);
  }

  template <typename T>
  void get(std::string_view key, std::optional<T>& out) {
    seen_.insert(std::string(key));
    if (!has(key)) return;
    T value{};
    convert(key, value);
    out = value;
  }

  template <typename T>
  void require(std::string_view key, T& out) {
    if (!has(key)) throw ConfigError(field(key), "required field is missing");
    get(key, out);
  }

  std::optional<Section> child(std::string_view key) {
    seen_.insert(std::string(key));
    if (!has(key)) return std::nullopt;
    return Section(j_.at(std::string(key)), field(key));
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) {
        throw ConfigError(field(item.key()), "unknown key");
      }
    }
  }

 private:
  template <typename T>
  void convert(std::string_view key, T& out) const {
    const json& v = j_.at(std::string(key));
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) throw ConfigError(field(key), "expected a number");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) {
          throw ConfigError(field(key), "expected an integer");
        }
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_integer() && !v.is_number_unsigned() &&
              v.get<long long>() < 0) {
            throw ConfigError(field(key), "expected a non-negative integer");
          }
        }
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(field(key), "expected a string");
      }
      out = v.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(field(key), std::string("wrong type: ") + e.what());
    }
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
void checked(const std::string& field, Fn&& fn) {
  try {
    fn();
  } catch (const InvalidArgument& e) {
    throw ConfigError(field, e.what());
  }
}

json ga_to_json(const GaConfig& ga) {
  return {{"population_size", ga.population_size},
          {"max_generations", ga.max_generations},
          {"saturation", ga.saturation},
          {"parents_mating", ga.parents_mating},
          {"keep_elitism", ga.keep_elitism},
          {"crossover_probability", ga.crossover_probability},
          {"mutation_probability", ga.mutation_probability},
          {"mutated_genes", ga.mutated_genes ? json(*ga.mutated_genes) : json()},
          {"target_probability", ga.target_probability},
          {"n_seeds", ga.n_seeds}};
}

json dqn_to_json(const DqnConfig& d, int n_seeds) {
  return {{"gamma", d.gamma},
          {"learning_rate", d.learning_rate},
          {"hidden1", d.hidden1},
          {"hidden2", d.resolved_hidden2()},
          {"minibatch", d.minibatch},
          {"replay_capacity", d.replay_capacity},
          {"learning_period", d.learning_period},
          {"target_sync_period", d.target_sync_period},
          {"episodes", d.episodes},
          {"n_seeds", n_seeds},
          {"epsilon",
           {{"start", d.epsilon.start},
            {"floor", d.epsilon.floor},
            {"decay", d.epsilon.decay}}},
          {"reward",
           {{"zeta", d.reward.zeta},
            {"below_value", d.reward.below_value},
            {"mid_coefficient", d.reward.mid_coefficient},
            {"high_threshold", d.reward.high_threshold},
            {"high_coefficient", d.reward.high_coefficient}}},
          {"fidelity_threshold", d.fidelity_threshold},
          {"noise_p", d.noise_p},
          {"noise_delta", d.noise_delta}};
}

void parse_ga(Section s, GaConfig& ga) {
  s.get("population_size", ga.population_size);
  s.get("max_generations", ga.max_generations);
  s.get("saturation", ga.saturation);
  s.get("parents_mating", ga.parents_mating);
  s.get("keep_elitism", ga.keep_elitism);
  s.get("crossover_probability", ga.crossover_probability);
  s.get("mutation_probability", ga.mutation_probability);
  s.get("mutated_genes", ga.mutated_genes);
  s.get("target_probability", ga.target_probability);
  s.get("n_seeds", ga.n_seeds);
  s.finish();
  checked("ga", [&] { ga.validate(); });
}

void parse_dqn(Section s, DqnConfig& d, int& n_seeds) {
  s.get("gamma", d.gamma);
  s.get("learning_rate", d.learning_rate);
  s.get("hidden1", d.hidden1);
  s.get("hidden2", d.hidden2);
  s.get("minibatch", d.minibatch);
  s.get("replay_capacity", d.replay_capacity);
  s.get("learning_period", d.learning_period);
  s.get("target_sync_period", d.target_sync_period);
  s.get("episodes", d.episodes);
  s.get("n_seeds", n_seeds);
  if (auto e = s.child("epsilon")) {
    e->get("start", d.epsilon.start);
    e->get("floor", d.epsilon.floor);
    e->get("decay", d.epsilon.decay);
    e->finish();
  }
  if (auto r = s.child("reward")) {
    r->get("zeta", d.reward.zeta);
    r->get("below_value", d.reward.below_value);
    r->get("mid_coefficient", d.reward.mid_coefficient);
    r->get("high_threshold", d.reward.high_threshold);
    r->get("high_coefficient", d.reward.high_coefficient);
    r->finish();
  }
  s.get("fidelity_threshold", d.fidelity_threshold);
  s.get("noise_p", d.noise_p);
  s.get("noise_delta", d.noise_delta);
  s.finish();
  checked("dqn", [&] { d.validate(); });
  if (n_seeds < 1) throw ConfigError("dqn.n_seeds", "must be >= 1");
}

std::pair<double, double> parse_range(Section& s, std::string_view key,
                                      std::pair<double, double> current) {
  std::vector<double> v;
  s.get(key, v);
  if (v.empty()) return current;
  if (v.size() != 2 || v[0] > v[1]) {
    throw ConfigError(s.field(key), "expected [min, max] with min <= max");
  }
  return {v[0], v[1]};
}

// --- artifact helpers -------------------------------------------------------

struct ArtifactLog {
  fs::path dir;
  json outputs = json::array();
  std::vector<fs::path> paths;

  fs::path path(const std::string& name) const { return dir / name; }

  void add_csv(const CsvWriter& w) {
    outputs.push_back({{"path", w.path().filename().string()},
                       {"kind", "csv"},
                       {"columns", w.columns()}});
    paths.push_back(w.path());
  }
  void add_json(const std::string& name, const json& j) {
    write_json_file(path(name), j);
    outputs.push_back({{"path", name}, {"kind", "json"}});
    paths.push_back(path(name));
  }
};

void write_trajectory_csv(ArtifactLog& log, const std::string& name,
                          std::span<const ActionId> actions,
                          std::span<const double> probs, double dt) {
  CsvWriter w(log.path(name), {"step", "time", "action", "probability"});
  for (std::size_t k = 0; k < probs.size(); ++k) {
    w.row({static_cast<int>(k + 1), (k + 1) * dt,
           k < actions.size() ? static_cast<int>(actions[k]) : 0, probs[k]});
  }
  log.add_csv(w);
}

GaRunRecord best_of(const std::vector<GaRunRecord>& runs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i) {
    if (*runs[i].best.fitness > *runs[best].best.fitness) best = i;
  }
  return runs[best];
}

std::vector<GaRunRecord> run_ga_seeds(const ExperimentConfig& c,
                                      const WorkerPool& pool) {
  const ActionSet set =
      ActionSet::make(c.action_set, c.chain.n, c.chain.field_strength);
  std::vector<GaRunRecord> runs(c.ga.n_seeds);
  GaRunOptions options;
  options.n_steps = c.resolved_n_steps();
  pool.parallel_for(runs.size(), [&](std::size_t s) {
    runs[s] = run_ga(c.ga, set, c.chain, std::nullopt,
                     ga_run_seed(c.seed, c.chain.n, static_cast<int>(s)), options);
  });
  return runs;
}

std::vector<TrainRecord> run_dqn_seeds(const ExperimentConfig& c,
                                       const WorkerPool& pool) {
  const ActionSet set =
      ActionSet::make(c.action_set, c.chain.n, c.chain.field_strength);
  const PropagatorCache cache = PropagatorCache::build(set, c.chain);
  std::vector<TrainRecord> runs(c.dqn_seeds);
  TrainOptions options;
  options.n_steps = c.resolved_n_steps();
  pool.parallel_for(runs.size(), [&](std::size_t s) {
    const std::uint64_t seed =
        derive_stream_id({c.seed, stream_tag("dqn.seed"), s});
    runs[s] = train(c.dqn, cache, seed, options);
  });
  return runs;
}

json ga_record_json(const GaRunRecord& r) {
  return {{"seed", r.seed},
          {"n_steps", r.n_steps},
          {"best_sequence", r.best.genes},
          {"best_fitness", r.best.fitness.value_or(0.0)},
          {"halt_reason", to_string(r.halt_reason)},
          {"generations_run", r.generations_run},
          {"wall_time_seconds", r.wall_time_seconds}};
}

RunResult run_baseline(const ExperimentConfig& c, ArtifactLog& log) {
  const Trajectory t = free_evolution_baseline(c.chain, c.resolved_n_steps());
  CsvWriter w(log.path("baseline.csv"),
              {"step", "time", "probability", "fidelity"});
  for (std::size_t k = 0; k < t.probabilities.size(); ++k) {
    const double p = std::clamp(t.probabilities[k], 0.0, 1.0);
    w.row({static_cast<int>(k + 1), (k + 1) * c.chain.dt, t.probabilities[k],
           averaged_fidelity(p)});
  }
  log.add_csv(w);
  log.add_json("baseline.json", {{"max_probability", t.max_probability},
                                 {"argmax_step", t.argmax_step},
                                 {"peak_time", t.peak_time(c.chain.dt)}});
  return {};
}

RunResult run_ga_mode(const ExperimentConfig& c, const WorkerPool& pool,
                      ArtifactLog& log) {
  const std::vector<GaRunRecord> runs = run_ga_seeds(c, pool);
  CsvWriter gens(log.path("ga_generations.csv"),
                 {"seed_index", "generation", "best_fitness", "mean_fitness"});
  CsvWriter seeds(log.path("ga_seeds.csv"),
                  {"seed_index", "seed", "max_probability", "fidelity",
                   "halt_reason", "generations", "argmax_step", "peak_time"});
  const ActionSet set =
      ActionSet::make(c.action_set, c.chain.n, c.chain.field_strength);
  const PropagatorCache cache = PropagatorCache::build(set, c.chain);
  json records = json::array();
  for (std::size_t s = 0; s < runs.size(); ++s) {
    const GaRunRecord& r = runs[s];
    for (std::size_t g = 0; g < r.best_fitness_per_generation.size(); ++g) {
      gens.row({static_cast<int>(s), static_cast<int>(g + 1),
                r.best_fitness_per_generation[g],
                r.mean_fitness_per_generation[g]});
    }
    const Trajectory t = evolve_sequence(r.best.genes, cache);
    seeds.row({static_cast<int>(s), r.seed, t.max_probability,
               averaged_fidelity(std::clamp(t.max_probability, 0.0, 1.0)),
               to_string(r.halt_reason), r.generations_run, t.argmax_step,
               t.peak_time(c.chain.dt)});
    records.push_back(ga_record_json(r));
  }
  log.add_csv(gens);
  log.add_csv(seeds);
  const GaRunRecord best = best_of(runs);
  const Trajectory t = evolve_sequence(best.best.genes, cache);
  write_trajectory_csv(log, "ga_best_trajectory.csv", best.best.genes,
                       t.probabilities, c.chain.dt);
  log.add_json("ga_record.json", {{"best_sequence", best.best.genes},
                                  {"best_fitness", *best.best.fitness},
                                  {"runs", records}});
  return {};
}

RunResult run_dqn_mode(const ExperimentConfig& c, const WorkerPool& pool,
                       ArtifactLog& log) {
  const std::vector<TrainRecord> runs = run_dqn_seeds(c, pool);
  CsvWriter eps(log.path("dqn_episodes.csv"),
                {"seed_index", "episode", "max_probability", "epsilon",
                 "loss_mean"});
  CsvWriter seeds(log.path("dqn_seeds.csv"),
                  {"seed_index", "seed", "best_probability", "best_episode",
                   "learning_events"});
  std::size_t best = 0;
  json records = json::array();
  for (std::size_t s = 0; s < runs.size(); ++s) {
    const TrainRecord& r = runs[s];
    for (const EpisodeStats& e : r.episodes) {
      eps.row({static_cast<int>(s), e.episode, e.max_probability, e.epsilon,
               e.loss_mean});
    }
    seeds.row({static_cast<int>(s), r.seed, r.best_probability, r.best_episode,
               static_cast<long long>(r.learning_events)});
    if (r.best_probability > runs[best].best_probability) best = s;
    records.push_back({{"seed", r.seed},
                       {"best_probability", r.best_probability},
                       {"best_episode", r.best_episode},
                       {"best_sequence", r.best_sequence},
                       {"wall_time_seconds", r.wall_time_seconds}});
    log.add_json("dqn_weights_" + std::to_string(s) + ".json",
                 r.network.to_json());
  }
  log.add_csv(eps);
  log.add_csv(seeds);
  write_trajectory_csv(log, "dqn_best_trajectory.csv", runs[best].best_sequence,
                       runs[best].best_probabilities, c.chain.dt);
  log.add_json("dqn_record.json", {{"best_seed_index", best},
                                   {"best_sequence", runs[best].best_sequence},
                                   {"best_probability", runs[best].best_probability},
                                   {"network", runs[best].network.to_json()},
                                   {"runs", records}});
  return {};
}

Controller load_controller(const ExperimentConfig& c, const WorkerPool& pool) {
  if (c.validate.controller == "ga") {
    if (!c.validate.source.empty()) {
      const json j = json::parse(read_text_file(c.validate.source));
      const char* key = j.contains("best_sequence") ? "best_sequence" : "sequence";
      return FixedSequenceController{j.at(key).get<ControlSequence>()};
    }
    return FixedSequenceController{best_of(run_ga_seeds(c, pool)).best.genes};
  }
  if (!c.validate.source.empty()) {
    const json j = json::parse(read_text_file(c.validate.source));
    return GreedyAgentController{
        QNetwork::from_json(j.contains("network") ? j.at("network") : j),
        c.resolved_n_steps()};
  }
  const std::vector<TrainRecord> runs = run_dqn_seeds(c, pool);
  std::size_t best = 0;
  for (std::size_t s = 1; s < runs.size(); ++s) {
    if (runs[s].best_probability > runs[best].best_probability) best = s;
  }
  return GreedyAgentController{runs[best].network, c.resolved_n_steps()};
}

RunResult run_validate_mode(const ExperimentConfig& c, const WorkerPool& pool,
                            ArtifactLog& log) {
  const Controller controller = load_controller(c, pool);
  const ActionSet set =
      ActionSet::make(c.action_set, c.chain.n, c.chain.field_strength);
  const PropagatorCache cache = PropagatorCache::build(set, c.chain);
  if (const auto* fixed = std::get_if<FixedSequenceController>(&controller)) {
    for (ActionId a : fixed->sequence) {
      if (!cache.contains(a)) {
        throw ConfigError("validate.source", "sequence uses unknown action " +
                                                 std::to_string(a));
      }
    }
  }
  const ValidationReport report = validate_controller(
      controller, cache, c.noise_grid, c.validation_runs,
      derive_stream_id({c.seed, stream_tag("validate.master")}), pool);
  CsvWriter cells(log.path("validation.csv"),
                  {"p", "delta", "runs", "mean_max_probability",
                   "std_max_probability"});
  CsvWriter runs(log.path("validation_runs.csv"),
                 {"p", "delta", "run", "max_probability"});
  for (const ValidationCell& cell : report.cells) {
    cells.row({cell.p, cell.delta, report.runs, cell.mean_max_probability,
               cell.std_max_probability});
    for (std::size_t r = 0; r < cell.max_probabilities.size(); ++r) {
      runs.row({cell.p, cell.delta, static_cast<int>(r),
                cell.max_probabilities[r]});
    }
  }
  log.add_csv(cells);
  log.add_csv(runs);
  json controller_json;
  if (const auto* fixed = std::get_if<FixedSequenceController>(&controller)) {
    controller_json = {{"kind", "ga"}, {"sequence", fixed->sequence}};
  } else {
    controller_json = {{"kind", "dqn"},
                       {"network", std::get<GreedyAgentController>(controller)
                                       .network.to_json()}};
  }
  log.add_json("validation_controller.json", controller_json);
  return {};
}

RunResult run_sweep_mode(const ExperimentConfig& c, const WorkerPool& pool,
                         ArtifactLog& log) {
  const SweepResult r =
      sweep_h_dt(c.chain.n, c.sweep_h_values, c.sweep_dt_values, c.ga,
                 c.action_set, c.chain.coupling, c.seed, pool);
  CsvWriter w(log.path("sweep.csv"),
              {"h", "dt", "n_steps", "max_probability", "halt_reason"});
  for (const SweepCell& cell : r.cells) {
    w.row({cell.h, cell.dt, cell.n_steps, cell.max_probability,
           to_string(cell.halt_reason)});
  }
  log.add_csv(w);
  return {};
}

RunResult run_histogram_mode(const ExperimentConfig& c, const WorkerPool& pool,
                             ArtifactLog& log) {
  const ActionHistogram h = action_histogram(
      c.chain, c.action_set, c.histogram.n_sequences, c.histogram.threshold,
      c.ga, c.histogram.max_runs, c.seed, pool, c.resolved_n_steps());
  CsvWriter w(log.path("histogram.csv"), {"action", "count", "share"});
  for (std::size_t a = 0; a < h.counts.size(); ++a) {
    w.row({static_cast<int>(a), static_cast<long long>(h.counts[a]),
           h.share(static_cast<ActionId>(a))});
  }
  log.add_csv(w);
  log.add_json("histogram.json", {{"requested", h.requested},
                                  {"harvested", h.harvested},
                                  {"shortfall", h.shortfall()},
                                  {"runs_used", h.runs_used},
                                  {"n_steps", h.n_steps},
                                  {"threshold", h.threshold}});
  RunResult result;
  if (!h.quota_met()) {
    result.status = "partial";
    result.exit_code = kExitPartial;
  }
  return result;
}

RunResult run_scaling_mode(const ExperimentConfig& c, const WorkerPool& pool,
                           ArtifactLog& log) {
  const MultiSeedSummary s =
      c.action_set == ActionSetKind::kSiteBySite
          ? scaling_study(c.lengths, c.ga, c.chain, c.ga.n_seeds, c.seed, pool)
          : multi_seed_ga(c.lengths, c.ga, c.action_set, c.chain, c.ga.n_seeds,
                          c.seed, pool);
  CsvWriter summary(log.path("scaling.csv"),
                    {"n", "n_steps", "best", "mean", "std", "target_reached",
                     "saturation", "max_generations"});
  CsvWriter seeds(log.path("scaling_seeds.csv"),
                  {"n", "seed_index", "seed", "max_probability", "argmax_step",
                   "halt_reason", "generations"});
  for (const LengthSummary& l : s.lengths) {
    summary.row({l.n, l.n_steps, l.best, l.mean, l.std, l.halt_counts[0],
                 l.halt_counts[1], l.halt_counts[2]});
    for (std::size_t i = 0; i < l.seeds.size(); ++i) {
      const SeedResult& r = l.seeds[i];
      seeds.row({l.n, static_cast<int>(i), r.seed, r.max_probability,
                 r.argmax_step, to_string(r.halt_reason), r.generations_run});
    }
  }
  log.add_csv(summary);
  log.add_csv(seeds);
  return {};
}

RunResult run_hpo_mode(const ExperimentConfig& c, const WorkerPool& pool,
                       ArtifactLog& log) {
  const ActionSet set =
      ActionSet::make(c.action_set, c.chain.n, c.chain.field_strength);
  ChainSpec spec = c.chain;
  const HpoResult r = hyperparameter_search(
      c.dqn, set, spec, c.hpo.trials, c.hpo.ranges, c.hpo.train_episodes,
      c.hpo.val_episodes, NoiseModel{c.hpo.noise_p, c.hpo.noise_delta}, c.seed,
      pool, c.resolved_n_steps());
  CsvWriter w(log.path("hpo_trials.csv"),
              {"trial", "gamma", "learning_rate", "hidden1", "hidden2",
               "train_best", "validation_mean", "validation_std"});
  for (const HpoTrial& t : r.trials) {
    w.row({t.index, t.gamma, t.learning_rate, t.hidden1, t.hidden2,
           t.train_best, t.validation_mean, t.validation_std});
  }
  log.add_csv(w);
  log.add_json("hpo_best.json",
               {{"winner", r.winner}, {"dqn", dqn_to_json(r.best_config, 1)}});
  return {};
}

}  // namespace

std::string_view to_string(Mode mode) {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return name;
  }
  return "unknown";
}

Mode parse_mode(std::string_view text) {
  for (const auto& [m, name] : kModeNames) {
    if (name == text) return m;
  }
  throw ConfigError("mode", "unknown mode '" + std::string(text) + "'");
}

int ExperimentConfig::resolved_n_steps() const {
  return n_steps.value_or(transfer_steps(chain.n, chain.dt));
}

json ExperimentConfig::to_json() const {
  json hpo_json = {
      {"trials", hpo.trials},
      {"train_episodes", hpo.train_episodes},
      {"val_episodes", hpo.val_episodes},
      {"noise_p", hpo.noise_p},
      {"noise_delta", hpo.noise_delta},
      {"gamma_range", {hpo.ranges.gamma_min, hpo.ranges.gamma_max}},
      {"learning_rate_range",
       {hpo.ranges.learning_rate_min, hpo.ranges.learning_rate_max}},
      {"hidden1_range", {hpo.ranges.hidden1_min, hpo.ranges.hidden1_max}}};
  return {
      {"mode", to_string(mode)},
      {"seed", seed},
      {"output_dir", output_dir},
      {"workers", workers},
      {"chain",
       {{"n", chain.n},
        {"coupling", chain.coupling},
        {"dt", chain.dt},
        {"field_strength", chain.field_strength},
        {"n_steps", resolved_n_steps()}}},
      {"action_set", to_string(action_set)},
      {"ga", ga_to_json(ga)},
      {"dqn", dqn_to_json(dqn, dqn_seeds)},
      {"noise_grid",
       {{"p_values", noise_grid.p_values},
        {"delta_values", noise_grid.delta_values},
        {"runs", validation_runs}}},
      {"validate",
       {{"controller", validate.controller}, {"source", validate.source}}},
      {"sweep", {{"h_values", sweep_h_values}, {"dt_values", sweep_dt_values}}},
      {"histogram",
       {{"n_sequences", histogram.n_sequences},
        {"threshold", histogram.threshold},
        {"max_runs", histogram.max_runs}}},
      {"scaling", {{"lengths", lengths}}},
      {"hpo", hpo_json},
  };
}

ExperimentConfig parse_experiment_config(const json& doc,
                                         std::optional<Mode> mode) {
  ExperimentConfig c;
  Section root(doc, "");

  std::string mode_text;
  root.get("mode", mode_text);
  if (!mode_text.empty()) {
    const Mode declared = parse_mode(mode_text);
    if (mode && *mode != declared) {
      throw ConfigError("mode", "config declares '" + mode_text +
                                    "' but the command is '" +
                                    std::string(to_string(*mode)) + "'");
    }
    c.mode = declared;
  } else if (mode) {
    c.mode = *mode;
  } else {
    throw ConfigError("mode", "required field is missing");
  }

  root.get("seed", c.seed);
  root.get("output_dir", c.output_dir);
  root.get("workers", c.workers);
  if (c.workers < 0) throw ConfigError("workers", "must be >= 0");

  {
    auto chain = root.child("chain");
    if (!chain) throw ConfigError("chain", "required field is missing");
    chain->require("n", c.chain.n);
    chain->get("coupling", c.chain.coupling);
    chain->get("dt", c.chain.dt);
    chain->get("field_strength", c.chain.field_strength);
    chain->get("n_steps", c.n_steps);
    chain->finish();
    checked("chain", [&] { c.chain.validate(); });
    if (c.n_steps && *c.n_steps < 1) {
      throw ConfigError("chain.n_steps", "must be >= 1");
    }
  }

  std::string kind;
  root.require("action_set", kind);
  checked("action_set", [&] { c.action_set = parse_action_set_kind(kind); });
  checked("action_set", [&] {
    (void)ActionSet::make(c.action_set, c.chain.n, c.chain.field_strength);
  });

  if (auto s = root.child("ga")) parse_ga(*s, c.ga);
  if (auto s = root.child("dqn")) parse_dqn(*s, c.dqn, c.dqn_seeds);

  if (auto s = root.child("noise_grid")) {
    s->get("p_values", c.noise_grid.p_values);
    s->get("delta_values", c.noise_grid.delta_values);
    s->get("runs", c.validation_runs);
    s->finish();
    for (double p : c.noise_grid.p_values) {
      checked("noise_grid.p_values", [&] { NoiseModel{p, 0.0}.validate(); });
    }
    for (double d : c.noise_grid.delta_values) {
      checked("noise_grid.delta_values", [&] { NoiseModel{0.0, d}.validate(); });
    }
    if (c.validation_runs < 1) throw ConfigError("noise_grid.runs", "must be >= 1");
  }

  if (auto s = root.child("validate")) {
    s->get("controller", c.validate.controller);
    s->get("source", c.validate.source);
    s->finish();
  }
  if (c.validate.controller != "ga" && c.validate.controller != "dqn") {
    throw ConfigError("validate.controller", "expected 'ga' or 'dqn'");
  }

  if (auto s = root.child("sweep")) {
    s->get("h_values", c.sweep_h_values);
    s->get("dt_values", c.sweep_dt_values);
    s->finish();
  }
  if (auto s = root.child("histogram")) {
    s->get("n_sequences", c.histogram.n_sequences);
    s->get("threshold", c.histogram.threshold);
    s->get("max_runs", c.histogram.max_runs);
    s->finish();
    if (c.histogram.n_sequences < 1) {
      throw ConfigError("histogram.n_sequences", "must be >= 1");
    }
    if (c.histogram.max_runs < 1) {
      throw ConfigError("histogram.max_runs", "must be >= 1");
    }
  }
  if (auto s = root.child("scaling")) {
    s->get("lengths", c.lengths);
    s->finish();
    for (int n : c.lengths) {
      if (n < 2) throw ConfigError("scaling.lengths", "lengths must be >= 2");
    }
  }
  if (auto s = root.child("hpo")) {
    s->get("trials", c.hpo.trials);
    s->get("train_episodes", c.hpo.train_episodes);
    s->get("val_episodes", c.hpo.val_episodes);
    s->get("noise_p", c.hpo.noise_p);
    s->get("noise_delta", c.hpo.noise_delta);
    auto& r = c.hpo.ranges;
    std::tie(r.gamma_min, r.gamma_max) =
        parse_range(*s, "gamma_range", {r.gamma_min, r.gamma_max});
    std::tie(r.learning_rate_min, r.learning_rate_max) = parse_range(
        *s, "learning_rate_range", {r.learning_rate_min, r.learning_rate_max});
    const auto h = parse_range(*s, "hidden1_range",
                               {static_cast<double>(r.hidden1_min),
                                static_cast<double>(r.hidden1_max)});
    r.hidden1_min = static_cast<int>(h.first);
    r.hidden1_max = static_cast<int>(h.second);
    s->finish();
    if (c.hpo.trials < 1) throw ConfigError("hpo.trials", "must be >= 1");
    if (c.hpo.train_episodes < 1) {
      throw ConfigError("hpo.train_episodes", "must be >= 1");
    }
    if (c.hpo.val_episodes < 1) {
      throw ConfigError("hpo.val_episodes", "must be >= 1");
    }
    checked("hpo", [&] { NoiseModel{c.hpo.noise_p, c.hpo.noise_delta}.validate(); });
    if (!(r.gamma_min > 0.0 && r.gamma_max <= 1.0)) {
      throw ConfigError("hpo.gamma_range", "must lie in (0, 1]");
    }
    if (!(r.learning_rate_min > 0.0)) {
      throw ConfigError("hpo.learning_rate_range", "must be positive");
    }
    if (r.hidden1_min < 1) throw ConfigError("hpo.hidden1_range", "must be >= 1");
  }
  root.finish();

  // Mode-specific requirements.
  switch (c.mode) {
    case Mode::kSweep:
      if (c.sweep_h_values.empty()) {
        throw ConfigError("sweep.h_values", "required for sweep mode");
      }
      if (c.sweep_dt_values.empty()) {
        throw ConfigError("sweep.dt_values", "required for sweep mode");
      }
      for (double h : c.sweep_h_values) {
        if (!(h > 0.0)) throw ConfigError("sweep.h_values", "must be positive");
      }
      for (double dt : c.sweep_dt_values) {
        if (!(dt > 0.0)) throw ConfigError("sweep.dt_values", "must be positive");
      }
      break;
    case Mode::kScaling:
      if (c.lengths.empty()) {
        throw ConfigError("scaling.lengths", "required for scaling mode");
      }
      if (c.action_set == ActionSetKind::kZhang16) {
        for (int n : c.lengths) {
          if (n < 6) {
            throw ConfigError("scaling.lengths", "zhang16 needs lengths >= 6");
          }
        }
      }
      break;
    case Mode::kValidate:
      if (!c.validate.source.empty() && !fs::exists(c.validate.source)) {
        throw ConfigError("validate.source",
                          "file not found: " + c.validate.source);
      }
      break;
    default:
      break;
  }
  return c;
}

void apply_override(json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("--set", "expected key=value, got '" +
                                   std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    if (part.empty()) throw ConfigError(key, "malformed override key");
    if (!node->is_object()) throw ConfigError(key, "override path is not an object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

ExperimentConfig load_experiment_config(const fs::path& path,
                                        std::optional<Mode> mode,
                                        const CliOverrides& overrides) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("", "cannot parse " + path.string() + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw ConfigError("--config", e.what());
  }
  for (const std::string& a : overrides.assignments) apply_override(doc, a);
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  if (overrides.seed) doc["seed"] = *overrides.seed;
  if (overrides.output_dir) doc["output_dir"] = *overrides.output_dir;
  if (overrides.workers) doc["workers"] = *overrides.workers;
  return parse_experiment_config(doc, mode);
}

std::string describe(const ExperimentConfig& config) {
  return config.to_json().dump(2) + "\n";
}

RunResult run_experiment(const ExperimentConfig& config, std::ostream& log,
                         const std::vector<fs::path>& inputs) {
  ArtifactLog artifacts;
  artifacts.dir = config.output_dir;
  std::error_code ec;
  fs::create_directories(artifacts.dir, ec);
  if (ec || !fs::is_directory(artifacts.dir)) {
    throw std::runtime_error("cannot create output directory " +
                             config.output_dir);
  }
  const WorkerPool pool(config.workers);
  log << "qstc " << to_string(config.mode) << ": N=" << config.chain.n
      << " dt=" << config.chain.dt << " steps=" << config.resolved_n_steps()
      << " workers=" << pool.size() << '\n';

  RunResult result;
  switch (config.mode) {
    case Mode::kBaseline:
      result = run_baseline(config, artifacts);
      break;
    case Mode::kGa:
      result = run_ga_mode(config, pool, artifacts);
      break;
    case Mode::kDqnTrain:
      result = run_dqn_mode(config, pool, artifacts);
      break;
    case Mode::kValidate:
      result = run_validate_mode(config, pool, artifacts);
      break;
    case Mode::kSweep:
      result = run_sweep_mode(config, pool, artifacts);
      break;
    case Mode::kHistogram:
      result = run_histogram_mode(config, pool, artifacts);
      break;
    case Mode::kScaling:
      result = run_scaling_mode(config, pool, artifacts);
      break;
    case Mode::kHpo:
      result = run_hpo_mode(config, pool, artifacts);
      break;
  }

  const std::string resolved = describe(config);
  json input_list = json::array();
  for (const fs::path& p : inputs) {
    input_list.push_back({{"path", p.string()}, {"sha1", file_git_sha1(p)}});
  }
  if (!config.validate.source.empty() && config.mode == Mode::kValidate) {
    input_list.push_back({{"path", config.validate.source},
                          {"sha1", file_git_sha1(config.validate.source)}});
  }
  json outputs = artifacts.outputs;
  for (json& o : outputs) {
    o["sha1"] = file_git_sha1(artifacts.dir / o["path"].get<std::string>());
  }
  write_json_file(artifacts.path("resolved_config.json"), config.to_json());
  write_json_file(artifacts.path("manifest.json"),
                  {{"tool", "qstc"},
                   {"mode", to_string(config.mode)},
                   {"status", result.status},
                   {"master_seed", config.seed},
                   {"seed_derivation",
                    "stream = derive_stream_id(master_seed, tag, indices...)"},
                   {"csv_schema_version", kCsvSchemaVersion},
                   {"config", "resolved_config.json"},
                   {"config_sha1", git_blob_sha1(resolved)},
                   {"inputs", input_list},
                   {"outputs", outputs}});
  artifacts.paths.push_back(artifacts.path("resolved_config.json"));
  artifacts.paths.push_back(artifacts.path("manifest.json"));
  result.artifacts = artifacts.paths;
  log << "status: " << result.status << ", " << result.artifacts.size()
      << " artifacts in " << config.output_dir << '\n';
  return result;
}

int run_cli(Mode mode, const fs::path& config_path,
            const CliOverrides& overrides, std::ostream& log,
            std::ostream& err) {
  std::optional<std::string> out_dir = overrides.output_dir;
  auto report = [&](const std::string& kind, const std::string& field,
                    const std::string& message, int code) {
    json record = {{"status", "error"},
                   {"kind", kind},
                   {"field", field},
                   {"message", message},
                   {"exit_code", code}};
    err << record.dump() << '\n';
    if (out_dir) {
      std::error_code ec;
      fs::create_directories(*out_dir, ec);
      if (!ec) {
        try {
          write_json_file(fs::path(*out_dir) / "error.json", record);
        } catch (const std::exception&) {
        }
      }
    }
    return code;
  };

  ExperimentConfig config;
  try {
    config = load_experiment_config(config_path, mode, overrides);
    out_dir = config.output_dir;
  } catch (const ConfigError& e) {
    return report("config", e.field(), e.what(), kExitConfigError);
  }
  try {
    return run_experiment(config, log, {config_path}).exit_code;
  } catch (const ConfigError& e) {
    return report("config", e.field(), e.what(), kExitConfigError);
  } catch (const std::exception& e) {
    return report("runtime", "", e.what(), kExitFailure);
  }
}

}  // namespace qstc
