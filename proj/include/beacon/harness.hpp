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

#ifndef BEACON_HARNESS_HPP_
#define BEACON_HARNESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "beacon/cmaes.hpp"
#include "beacon/information.hpp"
#include "beacon/localization.hpp"
#include "beacon/scenario.hpp"
#include "beacon/selection.hpp"

namespace beacon {

enum class TrajectoryKind { kLine, kLoop, kSerpentine, kScatter };

std::string_view to_string(TrajectoryKind kind);
TrajectoryKind parse_trajectory(std::string_view text);

// Parameters of a generated scenario. Positions follow a piecewise-linear
// path through the box [0, extent]; candidates are uniform over the box.
struct SyntheticSpec {
  int num_positions = 30;
  int num_candidates = 50;
  int dimension = 2;
  std::vector<double> extent = {400.0, 250.0};
  TrajectoryKind trajectory = TrajectoryKind::kSerpentine;
  double prior_sigma = 8.0;  // isotropic prior covariance sigma^2 I
  double noise_variance = 25.0;
  double cutoff = 250.0;
  int budget = 5;

  void validate() const;
};

Scenario generate_synthetic_scenario(const SyntheticSpec& spec, std::uint64_t seed);

// Axis-aligned box that candidate sites are drawn from.
struct Box {
  Vec lo;
  Vec hi;
};

std::vector<BeaconCandidate> sample_candidates(int count, const Box& box,
                                               std::uint64_t seed);

// Everything random about one trial, drawn from streams derived from the
// trial seed. Every algorithm of a trial sees this same instance.
struct InstanceOptions {
  EdgeReference edge_reference = EdgeReference::kGroundTruth;
  FimMode fim_mode = FimMode::kOneSample;
  std::optional<Box> resample_box;  // set to redraw candidates per trial
};

struct TrialInstance {
  Scenario scenario;
  std::vector<Vec> truth;
  MeasurementGraph graph;
  MeasurementSet measurements;
  std::optional<InfoState> state;  // always engaged after make_instance
};

TrialInstance make_instance(const Scenario& base, std::uint64_t trial_seed,
                            const InstanceOptions& options);

// Seed for an algorithm's own randomness within a trial.
std::uint64_t algorithm_seed(std::uint64_t trial_seed, Algorithm algorithm);

// Runs one selector on an instance. Heuristic selectors get their objective
// trace filled in afterwards.
struct SelectorOptions {
  EsConfig es;
  std::uint64_t brute_force_cap = kDefaultBruteForceCap;
  Execution execution = Execution::kParallel;
};
SelectionResult run_selector(const TrialInstance& instance, Algorithm algorithm,
                             std::uint64_t trial_seed,
                             const SelectorOptions& options);

// One (setting, trial, algorithm) outcome.
struct TrialRecord {
  std::string setting;
  int trial = 0;
  Algorithm algorithm = Algorithm::kGreedy;
  int k = 0;
  double cutoff = 0.0;
  double prior_sigma = 0.0;
  std::vector<int> selected;
  double f_norm = 0.0;
  double rmse_m = 0.0;
  double runtime_s = 0.0;
  bool converged_all = false;
  bool ok = true;
  std::string error;
  std::int64_t evaluations = 0;
};

struct TrialOptions {
  InstanceOptions instance;
  std::vector<Algorithm> algorithms;
  SelectorOptions selector;
  SolveOptions solve;
  bool record_timing = true;
};

// Samples the instance, runs every algorithm on it, solves MAP localization
// from the ground truth with only the chosen beacons and scores the RMSE.
// Per-algorithm failures are recorded, not thrown.
std::vector<TrialRecord> run_trial(const Scenario& scenario,
                                   std::uint64_t trial_seed,
                                   const TrialOptions& options);

struct Setting {
  std::string label;
  std::optional<int> budget;
  std::optional<double> cutoff;
  std::optional<double> prior_sigma;
};

struct ExperimentConfig {
  SyntheticSpec synthetic;
  std::optional<Scenario> base_scenario;  // overrides `synthetic` when set
  std::vector<Setting> settings;
  int trials = 50;
  std::vector<Algorithm> algorithms = {Algorithm::kRandom, Algorithm::kGreedy,
                                       Algorithm::kMeasurementGreedy,
                                       Algorithm::kCoverageGreedy};
  std::uint64_t master_seed = 1;
  bool resample_candidates = true;
  FimMode fim_mode = FimMode::kOneSample;
  EdgeReference edge_reference = EdgeReference::kGroundTruth;
  EsConfig es;
  std::uint64_t brute_force_cap = kDefaultBruteForceCap;
  bool record_timing = false;

  void validate() const;
};

// Baseline K=5, C=250, sigma=8 plus the one-at-a-time sweeps over
// K in {10, 15}, C in {150, 300, 450} and sigma in {5, 10, 15}.
ExperimentConfig table_sweep_config();

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ExperimentConfig& config);

Scenario apply_setting(const Scenario& base, const Setting& setting);
std::uint64_t trial_seed(std::uint64_t master_seed, std::string_view setting,
                         int trial);

struct SummaryRow {
  std::string setting;
  Algorithm algorithm = Algorithm::kGreedy;
  int trials = 0;  // completed trials
  int failed = 0;
  double rmse_mean = 0.0;
  double rmse_std = 0.0;
  double runtime_mean = 0.0;
  double runtime_std = 0.0;
  double f_norm_mean = 0.0;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;
  std::vector<SummaryRow> summary;
  int failures = 0;
};

// Statistics per (setting, algorithm) in config order over completed records.
std::vector<SummaryRow> summarize(const ExperimentConfig& config,
                                  const std::vector<TrialRecord>& records);

// Runs every (setting, trial) pair not already present in `completed`.
ExperimentResult run_experiment(
    const ExperimentConfig& config,
    const std::vector<TrialRecord>& completed = {},
    Execution execution = Execution::kParallel);

struct CertifyConfig {
  int instances = 100;
  int num_positions = 10;
  int num_candidates = 20;
  int dimension = 3;
  int max_budget = 7;
  double extent = 100.0;
  double prior_sigma = 8.0;
  double noise_variance = 25.0;
  FimMode fim_mode = FimMode::kOneSample;
  std::uint64_t seed = 1;
};

struct CertifyRow {
  int instance = 0;
  int k = 0;
  double greedy = 0.0;
  double brute_force = 0.0;
  double ratio = 1.0;
  bool holds = true;
  bool optimal = true;  // greedy value matches the optimum
};

std::vector<CertifyRow> run_certification(const CertifyConfig& config,
                                          Execution execution = Execution::kParallel);

}  // namespace beacon

#endif  // BEACON_HARNESS_HPP_
