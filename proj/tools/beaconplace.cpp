// Copyright 2026 The Authors.
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

// beaconplace: beacon placement, localization and experiment driver.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "beacon/cmaes.hpp"
#include "beacon/export.hpp"
#include "beacon/harness.hpp"
#include "beacon/localization.hpp"
#include "beacon/scenario_io.hpp"
#include "beacon/selection.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace beacon {
namespace {

constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;

struct Common {
  std::uint64_t seed = 1;
  std::string fim_mode = "one-sample";
  std::string out_dir;
  std::string format = "json";
};

void emit(const Common& common, const std::string& name, const std::string& text) {
  if (common.out_dir.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(common.out_dir);
  write_text(fs::path(common.out_dir) / name, text);
}

json load_json(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

EdgeReference parse_reference(const std::string& text) {
  if (text == "ground-truth") return EdgeReference::kGroundTruth;
  if (text == "prior-mean") return EdgeReference::kPriorMean;
  throw ConfigError("--edge-reference: expected ground-truth or prior-mean");
}

void check_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (format == a) return;
  }
  throw ConfigError("--format: unsupported value \"" + format + "\"");
}

struct GenerateArgs {
  SyntheticSpec spec;
  std::string trajectory = "serpentine";
};

int run_generate(const Common& common, GenerateArgs args) {
  check_format(common.format, {"json"});
  args.spec.trajectory = parse_trajectory(args.trajectory);
  const Scenario s = generate_synthetic_scenario(args.spec, common.seed);
  emit(common, "scenario.json", scenario_to_json(s).dump(2) + "\n");
  return 0;
}

struct SelectArgs {
  std::string scenario;
  std::string algorithm = "greedy";
  std::string edge_reference = "ground-truth";
  std::optional<int> budget;
  std::string es_trace;
  std::uint64_t brute_force_cap = kDefaultBruteForceCap;
};

TrialInstance load_instance(const std::string& path, std::optional<int> budget,
                            const Common& common, const std::string& reference) {
  Scenario scenario = load_scenario(path);
  if (budget) {
    scenario.budget = *budget;
    scenario.validate();
  }
  InstanceOptions options;
  options.edge_reference = parse_reference(reference);
  options.fim_mode = parse_fim_mode(common.fim_mode);
  return make_instance(scenario, common.seed, options);
}

int run_select(const Common& common, const SelectArgs& args) {
  check_format(common.format, {"json"});
  const Algorithm algorithm = parse_algorithm(args.algorithm);
  const TrialInstance instance =
      load_instance(args.scenario, args.budget, common, args.edge_reference);
  SelectionResult result;
  if (algorithm == Algorithm::kCmaes) {
    EsConfig es;
    es.seed = algorithm_seed(common.seed, algorithm);
    std::vector<EsGeneration> trace;
    result = cmaes_select(instance.scenario, *instance.state, instance.scenario.budget,
                          es, &trace);
    if (!args.es_trace.empty()) write_text(args.es_trace, es_trace_csv(trace));
  } else {
    SelectorOptions options;
    options.brute_force_cap = args.brute_force_cap;
    result = run_selector(instance, algorithm, common.seed, options);
  }
  emit(common, "selection.json", to_json(result).dump(2) + "\n");
  return 0;
}

struct LocalizeArgs {
  std::string scenario;
  std::string selection;
  std::string estimator = "map";
  std::string init = "truth";
  std::string edge_reference = "ground-truth";
};

int run_localize(const Common& common, const LocalizeArgs& args) {
  check_format(common.format, {"json", "csv"});
  const TrialInstance instance =
      load_instance(args.scenario, std::nullopt, common, args.edge_reference);
  const SelectionResult selection = selection_from_json(load_json(args.selection));
  const MeasurementGraph chosen = instance.graph.restricted_to(selection.selected);
  std::vector<Vec> init;
  if (args.init == "truth") {
    init = instance.truth;
  } else if (args.init == "prior") {
    init = instance.scenario.prior_means();
  } else {
    throw ConfigError("--init: expected truth or prior");
  }
  LocalizationResult result;
  if (args.estimator == "map") {
    result = map_solve(instance.scenario, chosen, instance.measurements, init);
  } else if (args.estimator == "mle") {
    result = mle_solve(instance.scenario, chosen, instance.measurements, init);
  } else {
    throw ConfigError("--estimator: expected map or mle");
  }
  if (common.format == "csv") {
    emit(common, "localization.csv", diagnostics_csv(result));
  } else {
    json doc = to_json(result);
    doc["rmse_m"] = rmse(result.estimates, instance.truth);
    emit(common, "localization.json", doc.dump(2) + "\n");
  }
  return 0;
}

struct ExperimentArgs {
  std::string config;
  std::optional<int> trials;
  std::string algorithms;
  std::string timing = "none";
  bool resume = false;
  bool seed_given = false;
  bool fim_given = false;
};

ExperimentConfig load_experiment_config(const std::string& path) {
  if (path.empty()) return table_sweep_config();
  json doc = load_json(path);
  if (auto it = doc.find("scenario"); it != doc.end() && it->is_string()) {
    fs::path scenario_path = it->get<std::string>();
    if (scenario_path.is_relative()) {
      scenario_path = fs::path(path).parent_path() / scenario_path;
    }
    *it = load_json(scenario_path);
  }
  return experiment_config_from_json(doc);
}

int run_experiment_cmd(const Common& common, const ExperimentArgs& args) {
  check_format(common.format, {"csv", "json"});
  ExperimentConfig config = load_experiment_config(args.config);
  if (args.trials) config.trials = *args.trials;
  if (!args.algorithms.empty()) config.algorithms = parse_algorithms(args.algorithms);
  if (args.seed_given) config.master_seed = common.seed;
  if (args.fim_given) config.fim_mode = parse_fim_mode(common.fim_mode);
  if (args.timing == "wall") {
    config.record_timing = true;
  } else if (args.timing != "none") {
    throw ConfigError("--timing: expected none or wall");
  }
  config.validate();

  const fs::path out_dir = common.out_dir.empty() ? fs::path(".") : fs::path(common.out_dir);
  fs::create_directories(out_dir);
  const fs::path records_path = out_dir / "records.csv";
  std::vector<TrialRecord> completed;
  if (args.resume && fs::exists(records_path)) {
    completed = parse_records_csv(read_text(records_path));
  }
  const auto start = std::chrono::steady_clock::now();
  const ExperimentResult result = run_experiment(config, completed);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  write_text(records_path, records_csv(result.records));
  write_text(out_dir / "summary.csv", summary_csv(result.summary));
  if (common.format == "json") {
    write_text(out_dir / "summary.json", summary_json(config, result).dump(2) + "\n");
    write_text(out_dir / "records.json", records_json(result.records).dump(2) + "\n");
  }
  std::fprintf(stderr, "experiment: %zu records, %d failed, %.2f s total\n",
               result.records.size(), result.failures, elapsed);
  for (const TrialRecord& r : result.records) {
    if (!r.ok) {
      std::fprintf(stderr, "  failed %s trial %d %s: %s\n", r.setting.c_str(), r.trial,
                   std::string(to_string(r.algorithm)).c_str(), r.error.c_str());
    }
  }
  return result.failures > 0 ? kExitPartial : 0;
}

int run_certify(const Common& common, CertifyConfig config) {
  check_format(common.format, {"csv", "json"});
  config.seed = common.seed;
  config.fim_mode = parse_fim_mode(common.fim_mode);
  const auto rows = run_certification(config);
  const json report = certify_json(config, rows);
  if (common.format == "csv") {
    emit(common, "certify.csv", certify_csv(rows));
  } else {
    emit(common, "certify.json", report.dump(2) + "\n");
  }
  std::fprintf(stderr, "certify: bound holds on %d/%zu pairs, greedy optimal on %d/%d instances\n",
               report["bound_holds"].get<int>(), rows.size(),
               report["greedy_optimal_instances"].get<int>(), config.instances);
  return 0;
}

int main_impl(int argc, char** argv) {
  CLI::App app{"Beacon placement for range-aided localization"};
  app.require_subcommand(1);
  Common common;

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Emit a synthetic scenario JSON");
  generate->add_option("--n", gen.spec.num_positions, "Number of positions");
  generate->add_option("--m", gen.spec.num_candidates, "Number of candidate sites");
  generate->add_option("--dimension", gen.spec.dimension, "2 or 3");
  generate->add_option("--extent", gen.spec.extent, "Box lengths, one per axis");
  generate->add_option("--trajectory", gen.trajectory, "line | loop | serpentine | scatter");
  generate->add_option("--prior-sigma", gen.spec.prior_sigma);
  generate->add_option("--noise-variance", gen.spec.noise_variance);
  generate->add_option("--cutoff", gen.spec.cutoff);
  generate->add_option("--budget", gen.spec.budget);

  SelectArgs sel;
  auto* select = app.add_subcommand("select", "Select beacons for one scenario");
  select->add_option("--scenario", sel.scenario)->required();
  select->add_option("--algorithm", sel.algorithm,
                     "greedy | brute_force | measurement_greedy | coverage_greedy | random | cmaes");
  select->add_option("--budget", sel.budget, "Override the scenario budget");
  select->add_option("--edge-reference", sel.edge_reference, "ground-truth | prior-mean");
  select->add_option("--brute-force-cap", sel.brute_force_cap);
  select->add_option("--es-trace", sel.es_trace, "CSV path for per-generation ES values");

  LocalizeArgs loc;
  auto* localize = app.add_subcommand("localize", "Solve localization for a selection");
  localize->add_option("--scenario", loc.scenario)->required();
  localize->add_option("--selection", loc.selection, "SelectionResult JSON")->required();
  localize->add_option("--estimator", loc.estimator, "map | mle");
  localize->add_option("--init", loc.init, "truth | prior");
  localize->add_option("--edge-reference", loc.edge_reference, "ground-truth | prior-mean");

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Run the trial sweep");
  experiment->add_option("--config", exp.config, "Experiment config JSON");
  experiment->add_option("--trials", exp.trials);
  experiment->add_option("--algorithms", exp.algorithms, "Comma-separated list");
  experiment->add_option("--timing", exp.timing, "none | wall");
  experiment->add_flag("--resume", exp.resume, "Skip (setting, trial) pairs already in records.csv");

  CertifyConfig cert;
  auto* certify = app.add_subcommand("certify", "Check greedy against brute force");
  certify->add_option("--instances", cert.instances);
  certify->add_option("--n", cert.num_positions);
  certify->add_option("--m", cert.num_candidates);
  certify->add_option("--dimension", cert.dimension);
  certify->add_option("--k-max", cert.max_budget);
  certify->add_option("--extent", cert.extent);
  certify->add_option("--prior-sigma", cert.prior_sigma);
  certify->add_option("--noise-variance", cert.noise_variance);

  for (auto [cmd, format] : {std::pair{generate, "json"}, std::pair{select, "json"},
                             std::pair{localize, "json"}, std::pair{experiment, "csv"},
                             std::pair{certify, "json"}}) {
    cmd->add_option("--seed", common.seed, "Master seed");
    cmd->add_option("--fim-mode", common.fim_mode, "expected | one-sample");
    cmd->add_option("--out-dir", common.out_dir, "Output directory (default stdout)");
    cmd->add_option("--format", common.format, std::string("Output format (default ") +
                                                    format + ")");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*generate) return run_generate(common, gen);
    if (*select) return run_select(common, sel);
    if (*localize) return run_localize(common, loc);
    if (*experiment) {
      if (experiment->get_option("--format")->count() == 0) common.format = "csv";
      exp.seed_given = experiment->get_option("--seed")->count() > 0;
      exp.fim_given = experiment->get_option("--fim-mode")->count() > 0;
      return run_experiment_cmd(common, exp);
    }
    if (*certify) return run_certify(common, cert);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace
}  // namespace beacon

int main(int argc, char** argv) { return beacon::main_impl(argc, argv); }
