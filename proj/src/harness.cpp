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

#include "beacon/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include "beacon/rng.hpp"
#include "beacon/scenario_io.hpp"
#include "beacon/stats.hpp"

namespace beacon {
namespace {

// Waypoints in the unit box; the z coordinate, when present, is mid-height.
std::vector<std::vector<double>> unit_waypoints(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::kLine:
      return {{0.1, 0.1}, {0.9, 0.9}};
    case TrajectoryKind::kLoop:
      return {{0.15, 0.15}, {0.85, 0.15}, {0.85, 0.85}, {0.15, 0.85}, {0.15, 0.15}};
    case TrajectoryKind::kSerpentine:
      return {{0.1, 0.15}, {0.9, 0.15}, {0.9, 0.5}, {0.1, 0.5}, {0.1, 0.85}, {0.9, 0.85}};
    case TrajectoryKind::kScatter:
      return {};
  }
  return {};
}

std::vector<Vec> polyline_points(const std::vector<Vec>& waypoints, int count,
                                 bool closed) {
  std::vector<double> cumulative = {0.0};
  for (std::size_t k = 1; k < waypoints.size(); ++k) {
    cumulative.push_back(cumulative.back() +
                         (waypoints[k] - waypoints[k - 1]).norm());
  }
  const double total = cumulative.back();
  std::vector<Vec> out;
  for (int p = 0; p < count; ++p) {
    double s = 0.0;
    if (closed) {
      s = total * p / count;
    } else if (count > 1) {
      s = total * p / (count - 1);
    } else {
      s = 0.5 * total;
    }
    std::size_t seg = 1;
    while (seg + 1 < waypoints.size() && cumulative[seg] < s) ++seg;
    const double len = cumulative[seg] - cumulative[seg - 1];
    const double t = len > 0.0 ? std::clamp((s - cumulative[seg - 1]) / len, 0.0, 1.0) : 0.0;
    out.push_back(waypoints[seg - 1] + t * (waypoints[seg] - waypoints[seg - 1]));
  }
  return out;
}

Vec uniform_in(const Box& box, Rng& rng) {
  Vec v(box.lo.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    std::uniform_real_distribution<double> u(box.lo[k], box.hi[k]);
    v[k] = u(rng);
  }
  return v;
}

Box extent_box(const std::vector<double>& extent) {
  Box box;
  box.lo = Vec::Zero(static_cast<Eigen::Index>(extent.size()));
  box.hi = Eigen::Map<const Eigen::VectorXd>(extent.data(),
                                             static_cast<Eigen::Index>(extent.size()));
  return box;
}

Box bounding_box(const std::vector<BeaconCandidate>& candidates) {
  Box box{candidates.at(0).position, candidates.at(0).position};
  for (const auto& c : candidates) {
    box.lo = box.lo.cwiseMin(c.position);
    box.hi = box.hi.cwiseMax(c.position);
  }
  return box;
}

double prior_sigma_of(const Scenario& s) {
  return std::sqrt(s.positions.at(0).prior_covariance(0, 0));
}

std::string error_path(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

template <typename T>
T read(const nlohmann::json& obj, const char* key, T fallback,
       const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(error_path(path, key) + ": wrong type");
  }
}

}  // namespace

std::string_view to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::kLine: return "line";
    case TrajectoryKind::kLoop: return "loop";
    case TrajectoryKind::kSerpentine: return "serpentine";
    case TrajectoryKind::kScatter: return "scatter";
  }
  return "unknown";
}

TrajectoryKind parse_trajectory(std::string_view text) {
  for (auto k : {TrajectoryKind::kLine, TrajectoryKind::kLoop,
                 TrajectoryKind::kSerpentine, TrajectoryKind::kScatter}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError("trajectory: expected line, loop, serpentine or scatter");
}

void SyntheticSpec::validate() const {
  if (dimension != 2 && dimension != 3) throw ConfigError("dimension: must be 2 or 3");
  if (static_cast<int>(extent.size()) != dimension) {
    throw ConfigError("extent: needs one length per dimension");
  }
  for (double e : extent) {
    if (!(e > 0.0)) throw ConfigError("extent: lengths must be positive");
  }
  if (num_positions < 1) throw ConfigError("n: must be >= 1");
  if (num_candidates < 1) throw ConfigError("m: must be >= 1");
  if (budget < 1 || budget > num_candidates) {
    throw ConfigError("budget: must satisfy 1 <= K <= m");
  }
  if (!(prior_sigma > 0.0)) throw ConfigError("prior_sigma: must be positive");
  if (!(noise_variance > 0.0)) throw ConfigError("noise_variance: must be positive");
  if (!(cutoff > 0.0)) throw ConfigError("cutoff: must be positive");
}

std::vector<BeaconCandidate> sample_candidates(int count, const Box& box,
                                               std::uint64_t seed) {
  Rng rng(seed);
  std::vector<BeaconCandidate> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) out.push_back({k + 1, uniform_in(box, rng)});
  return out;
}

Scenario generate_synthetic_scenario(const SyntheticSpec& spec, std::uint64_t seed) {
  spec.validate();
  const int d = spec.dimension;
  const Box box = extent_box(spec.extent);
  Scenario s;
  s.dimension = d;
  s.budget = spec.budget;
  s.cutoff = spec.cutoff;
  s.noise.mode = NoiseMode::kConstant;
  s.noise.constant_variance = spec.noise_variance;

  std::vector<Vec> means;
  if (spec.trajectory == TrajectoryKind::kScatter) {
    Rng rng(Rng::derive(seed, "positions"));
    for (int i = 0; i < spec.num_positions; ++i) means.push_back(uniform_in(box, rng));
  } else {
    std::vector<Vec> waypoints;
    for (const auto& w : unit_waypoints(spec.trajectory)) {
      Vec p(d);
      for (int k = 0; k < d; ++k) p[k] = (k < 2 ? w[k] : 0.5) * spec.extent[k];
      waypoints.push_back(p);
    }
    means = polyline_points(waypoints, spec.num_positions,
                            spec.trajectory == TrajectoryKind::kLoop);
  }
  const Mat cov = Mat::Identity(d, d) * (spec.prior_sigma * spec.prior_sigma);
  for (auto& mean : means) s.positions.push_back({mean, cov});
  s.candidates = sample_candidates(spec.num_candidates, box,
                                   Rng::derive(seed, "candidates"));
  s.validate();
  return s;
}

TrialInstance make_instance(const Scenario& base, std::uint64_t seed,
                            const InstanceOptions& options) {
  TrialInstance inst;
  inst.scenario = base;
  if (options.resample_box) {
    inst.scenario.candidates =
        sample_candidates(base.num_candidates(), *options.resample_box,
                          Rng::derive(seed, "candidates"));
  }
  inst.scenario.validate();
  inst.truth = sample_ground_truth(inst.scenario, Rng::derive(seed, "truth"));
  inst.graph = options.edge_reference == EdgeReference::kGroundTruth
                   ? build_graph(inst.scenario, inst.truth)
                   : build_graph(inst.scenario);
  inst.measurements = sample_measurements(inst.graph, inst.truth,
                                          inst.scenario.candidates,
                                          Rng::derive(seed, "measurements"));
  inst.state.emplace(InfoState::create(inst.scenario, inst.graph, inst.truth,
                                       &inst.measurements, options.fim_mode));
  return inst;
}

std::uint64_t algorithm_seed(std::uint64_t seed, Algorithm algorithm) {
  return Rng::derive(Rng::derive(seed, "algorithm"), to_string(algorithm));
}

SelectionResult run_selector(const TrialInstance& instance, Algorithm algorithm,
                             std::uint64_t seed, const SelectorOptions& options) {
  const InfoState& state = *instance.state;
  const int k = instance.scenario.budget;
  SelectionResult result;
  switch (algorithm) {
    case Algorithm::kGreedy:
      return greedy_select(state, k, options.execution);
    case Algorithm::kBruteForce:
      return brute_force_select(state, k, options.brute_force_cap, options.execution);
    case Algorithm::kMeasurementGreedy:
      result = measurement_greedy_select(instance.graph, k);
      break;
    case Algorithm::kCoverageGreedy:
      result = coverage_greedy_select(instance.graph, k);
      break;
    case Algorithm::kRandom:
      result = random_select(instance.graph, k, algorithm_seed(seed, algorithm));
      break;
    case Algorithm::kCmaes: {
      EsConfig es = options.es;
      es.seed = algorithm_seed(seed, algorithm);
      return cmaes_select(instance.scenario, state, k, es, nullptr, options.execution);
    }
  }
  annotate_objective(result, state);
  return result;
}

std::vector<TrialRecord> run_trial(const Scenario& scenario, std::uint64_t seed,
                                   const TrialOptions& options) {
  const TrialInstance instance = make_instance(scenario, seed, options.instance);
  std::vector<TrialRecord> records;
  for (Algorithm algorithm : options.algorithms) {
    TrialRecord rec;
    rec.algorithm = algorithm;
    rec.k = scenario.budget;
    rec.cutoff = scenario.cutoff;
    rec.prior_sigma = prior_sigma_of(scenario);
    try {
      const SelectionResult sel =
          run_selector(instance, algorithm, seed, options.selector);
      rec.selected = sel.selected;
      rec.f_norm = sel.value();
      rec.evaluations = sel.evaluations;
      rec.runtime_s = options.record_timing ? sel.wall_time_s : 0.0;
      const MeasurementGraph chosen = instance.graph.restricted_to(sel.selected);
      const LocalizationResult loc =
          map_solve(instance.scenario, chosen, instance.measurements,
                    instance.truth, options.solve, options.selector.execution);
      rec.rmse_m = rmse(loc.estimates, instance.truth);
      rec.converged_all = loc.all_converged();
    } catch (const std::exception& e) {
      rec.ok = false;
      rec.error = e.what();
      rec.f_norm = std::numeric_limits<double>::quiet_NaN();
      rec.rmse_m = std::numeric_limits<double>::quiet_NaN();
      rec.runtime_s = std::numeric_limits<double>::quiet_NaN();
      rec.converged_all = false;
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ConfigError("trials: must be >= 1");
  if (algorithms.empty()) throw ConfigError("algorithms: empty list");
  if (settings.empty()) throw ConfigError("settings: empty list");
  std::set<std::string> labels;
  for (std::size_t k = 0; k < settings.size(); ++k) {
    const Setting& s = settings[k];
    const std::string path = "settings[" + std::to_string(k) + "]";
    if (s.label.empty()) throw ConfigError(path + ".label: must be non-empty");
    if (s.label.find_first_of(",\"\n\r") != std::string::npos) {
      throw ConfigError(path + ".label: must not contain commas, quotes or newlines");
    }
    if (!labels.insert(s.label).second) {
      throw ConfigError(path + ".label: duplicate \"" + s.label + "\"");
    }
    if (s.budget && *s.budget < 1) throw ConfigError(path + ".budget: must be positive");
    if (s.cutoff && !(*s.cutoff > 0.0)) throw ConfigError(path + ".cutoff: must be positive");
    if (s.prior_sigma && !(*s.prior_sigma > 0.0)) {
      throw ConfigError(path + ".prior_sigma: must be positive");
    }
  }
  if (base_scenario) {
    base_scenario->validate();
  } else {
    synthetic.validate();
  }
  es.validate();
}

ExperimentConfig table_sweep_config() {
  ExperimentConfig c;
  c.settings = {
      {"baseline", 5, 250.0, 8.0},  {"K=10", 10, 250.0, 8.0},
      {"K=15", 15, 250.0, 8.0},     {"C=150", 5, 150.0, 8.0},
      {"C=300", 5, 300.0, 8.0},     {"C=450", 5, 450.0, 8.0},
      {"sigma=5", 5, 250.0, 5.0},   {"sigma=10", 5, 250.0, 10.0},
      {"sigma=15", 5, 250.0, 15.0},
  };
  return c;
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected an object");
  ExperimentConfig c = table_sweep_config();
  if (auto it = doc.find("synthetic"); it != doc.end()) {
    const auto& s = *it;
    SyntheticSpec& spec = c.synthetic;
    spec.num_positions = read(s, "n", spec.num_positions, "synthetic");
    spec.num_candidates = read(s, "m", spec.num_candidates, "synthetic");
    spec.dimension = read(s, "dimension", spec.dimension, "synthetic");
    spec.extent = read(s, "extent", spec.extent, "synthetic");
    spec.trajectory = parse_trajectory(
        read(s, "trajectory", std::string(to_string(spec.trajectory)), "synthetic"));
    spec.prior_sigma = read(s, "prior_sigma", spec.prior_sigma, "synthetic");
    spec.noise_variance = read(s, "noise_variance", spec.noise_variance, "synthetic");
    spec.cutoff = read(s, "cutoff", spec.cutoff, "synthetic");
    spec.budget = read(s, "budget", spec.budget, "synthetic");
  }
  if (auto it = doc.find("scenario"); it != doc.end() && it->is_object()) {
    c.base_scenario = scenario_from_json(*it);
  }
  if (auto it = doc.find("settings"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("settings: expected an array");
    c.settings.clear();
    for (std::size_t k = 0; k < it->size(); ++k) {
      const auto& s = (*it)[k];
      const std::string path = "settings[" + std::to_string(k) + "]";
      Setting setting;
      setting.label = read(s, "label", std::string(), path);
      if (s.contains("budget")) setting.budget = read(s, "budget", 0, path);
      if (s.contains("cutoff")) setting.cutoff = read(s, "cutoff", 0.0, path);
      if (s.contains("prior_sigma")) setting.prior_sigma = read(s, "prior_sigma", 0.0, path);
      c.settings.push_back(std::move(setting));
    }
  }
  c.trials = read(doc, "trials", c.trials, "");
  if (auto it = doc.find("algorithms"); it != doc.end()) {
    if (!it->is_array()) throw ConfigError("algorithms: expected an array");
    c.algorithms.clear();
    for (const auto& a : *it) {
      if (!a.is_string()) throw ConfigError("algorithms: expected strings");
      c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
  }
  c.master_seed = read(doc, "master_seed", c.master_seed, "");
  c.resample_candidates = read(doc, "resample_candidates", c.resample_candidates, "");
  c.fim_mode = parse_fim_mode(read(doc, "fim_mode", std::string("one-sample"), ""));
  const std::string reference = read(doc, "edge_reference", std::string("ground-truth"), "");
  if (reference == "ground-truth") {
    c.edge_reference = EdgeReference::kGroundTruth;
  } else if (reference == "prior-mean") {
    c.edge_reference = EdgeReference::kPriorMean;
  } else {
    throw ConfigError("edge_reference: expected ground-truth or prior-mean");
  }
  if (auto it = doc.find("es"); it != doc.end()) {
    const auto& e = *it;
    c.es.population_size = read(e, "population_size", c.es.population_size, "es");
    c.es.initial_step = read(e, "initial_step", c.es.initial_step, "es");
    c.es.max_evaluations = read(e, "max_evaluations", c.es.max_evaluations, "es");
    c.es.stagnation_tolerance =
        read(e, "stagnation_tolerance", c.es.stagnation_tolerance, "es");
    c.es.stagnation_window = read(e, "stagnation_window", c.es.stagnation_window, "es");
    c.es.max_restarts = read(e, "max_restarts", c.es.max_restarts, "es");
  }
  c.brute_force_cap = read(doc, "brute_force_cap", c.brute_force_cap, "");
  c.record_timing = read(doc, "record_timing", c.record_timing, "");
  c.validate();
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json doc;
  nlohmann::json synthetic;
  synthetic["n"] = c.synthetic.num_positions;
  synthetic["m"] = c.synthetic.num_candidates;
  synthetic["dimension"] = c.synthetic.dimension;
  synthetic["extent"] = c.synthetic.extent;
  synthetic["trajectory"] = to_string(c.synthetic.trajectory);
  synthetic["prior_sigma"] = c.synthetic.prior_sigma;
  synthetic["noise_variance"] = c.synthetic.noise_variance;
  synthetic["cutoff"] = c.synthetic.cutoff;
  synthetic["budget"] = c.synthetic.budget;
  doc["synthetic"] = synthetic;
  if (c.base_scenario) doc["scenario"] = scenario_to_json(*c.base_scenario);
  nlohmann::json settings = nlohmann::json::array();
  for (const auto& s : c.settings) {
    nlohmann::json row;
    row["label"] = s.label;
    if (s.budget) row["budget"] = *s.budget;
    if (s.cutoff) row["cutoff"] = *s.cutoff;
    if (s.prior_sigma) row["prior_sigma"] = *s.prior_sigma;
    settings.push_back(row);
  }
  doc["settings"] = settings;
  doc["trials"] = c.trials;
  nlohmann::json algorithms = nlohmann::json::array();
  for (Algorithm a : c.algorithms) algorithms.push_back(to_string(a));
  doc["algorithms"] = algorithms;
  doc["master_seed"] = c.master_seed;
  doc["resample_candidates"] = c.resample_candidates;
  doc["fim_mode"] = to_string(c.fim_mode);
  doc["edge_reference"] =
      c.edge_reference == EdgeReference::kGroundTruth ? "ground-truth" : "prior-mean";
  doc["es"] = {{"population_size", c.es.population_size},
               {"initial_step", c.es.initial_step},
               {"max_evaluations", c.es.max_evaluations},
               {"stagnation_tolerance", c.es.stagnation_tolerance},
               {"stagnation_window", c.es.stagnation_window},
               {"max_restarts", c.es.max_restarts}};
  doc["brute_force_cap"] = c.brute_force_cap;
  doc["record_timing"] = c.record_timing;
  return doc;
}

Scenario apply_setting(const Scenario& base, const Setting& setting) {
  Scenario s = base;
  if (setting.budget) s.budget = *setting.budget;
  if (setting.cutoff) s.cutoff = *setting.cutoff;
  if (setting.prior_sigma) {
    const double var = *setting.prior_sigma * *setting.prior_sigma;
    for (auto& p : s.positions) {
      p.prior_covariance = Mat::Identity(s.dimension, s.dimension) * var;
    }
  }
  s.validate();
  return s;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::string_view setting,
                         int trial) {
  return Rng::derive(Rng::derive(master_seed, setting),
                     static_cast<std::uint64_t>(trial));
}

std::vector<SummaryRow> summarize(const ExperimentConfig& config,
                                  const std::vector<TrialRecord>& records) {
  std::vector<SummaryRow> rows;
  for (const Setting& setting : config.settings) {
    for (Algorithm algorithm : config.algorithms) {
      SummaryRow row;
      row.setting = setting.label;
      row.algorithm = algorithm;
      std::vector<double> rmse_values, runtimes, f_values;
      for (const TrialRecord& r : records) {
        if (r.setting != setting.label || r.algorithm != algorithm) continue;
        if (!r.ok) {
          ++row.failed;
          continue;
        }
        rmse_values.push_back(r.rmse_m);
        runtimes.push_back(r.runtime_s);
        f_values.push_back(r.f_norm);
      }
      row.trials = static_cast<int>(rmse_values.size());
      row.rmse_mean = stats::mean(rmse_values);
      row.rmse_std = stats::sample_std(rmse_values);
      row.runtime_mean = stats::mean(runtimes);
      row.runtime_std = stats::sample_std(runtimes);
      row.f_norm_mean = stats::mean(f_values);
      if (row.trials == 0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.rmse_mean = row.rmse_std = row.runtime_mean = row.runtime_std = nan;
        row.f_norm_mean = nan;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::vector<TrialRecord>& completed,
                                Execution execution) {
  config.validate();
  const Scenario base =
      config.base_scenario
          ? *config.base_scenario
          : generate_synthetic_scenario(config.synthetic,
                                        Rng::derive(config.master_seed, "scenario"));
  TrialOptions options;
  options.instance.edge_reference = config.edge_reference;
  options.instance.fim_mode = config.fim_mode;
  if (config.resample_candidates) {
    options.instance.resample_box = config.base_scenario
                                        ? bounding_box(base.candidates)
                                        : extent_box(config.synthetic.extent);
  }
  options.algorithms = config.algorithms;
  options.selector.es = config.es;
  options.selector.brute_force_cap = config.brute_force_cap;
  options.selector.execution =
      execution == Execution::kParallel ? Execution::kSerial : execution;
  options.record_timing = config.record_timing;

  // (setting, trial) -> algorithms already on record.
  std::map<std::pair<std::string, int>, std::set<Algorithm>> done;
  for (const TrialRecord& r : completed) done[{r.setting, r.trial}].insert(r.algorithm);
  const std::set<Algorithm> wanted(config.algorithms.begin(), config.algorithms.end());

  struct Job {
    int setting;
    int trial;
    bool reuse;
  };
  std::vector<Job> jobs;
  for (int s = 0; s < static_cast<int>(config.settings.size()); ++s) {
    for (int t = 0; t < config.trials; ++t) {
      auto it = done.find({config.settings[s].label, t});
      const bool reuse =
          it != done.end() && std::includes(it->second.begin(), it->second.end(),
                                            wanted.begin(), wanted.end());
      jobs.push_back({s, t, reuse});
    }
  }
  std::vector<Scenario> scenarios;
  for (const Setting& s : config.settings) scenarios.push_back(apply_setting(base, s));

  std::vector<std::vector<TrialRecord>> slots(jobs.size());
  auto run_job = [&](std::size_t j) {
    const Job& job = jobs[j];
    const Setting& setting = config.settings[job.setting];
    if (job.reuse) {
      for (const TrialRecord& r : completed) {
        if (r.setting == setting.label && r.trial == job.trial && wanted.count(r.algorithm)) {
          slots[j].push_back(r);
        }
      }
      std::stable_sort(slots[j].begin(), slots[j].end(),
                       [&](const TrialRecord& a, const TrialRecord& b) {
                         auto pos = [&](Algorithm x) {
                           return std::find(config.algorithms.begin(),
                                            config.algorithms.end(), x) -
                                  config.algorithms.begin();
                         };
                         return pos(a.algorithm) < pos(b.algorithm);
                       });
      return;
    }
    auto records = run_trial(scenarios[job.setting],
                             trial_seed(config.master_seed, setting.label, job.trial),
                             options);
    for (auto& r : records) {
      r.setting = setting.label;
      r.trial = job.trial;
    }
    slots[j] = std::move(records);
  };
  if (execution == Execution::kSerial) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run_job(j);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t j = 0; j < jobs.size(); ++j) run_job(j);
  }

  ExperimentResult result;
  for (auto& slot : slots) {
    for (auto& r : slot) {
      if (!r.ok) ++result.failures;
      result.records.push_back(std::move(r));
    }
  }
  result.summary = summarize(config, result.records);
  return result;
}

std::vector<CertifyRow> run_certification(const CertifyConfig& config,
                                          Execution execution) {
  if (config.instances < 1 || config.max_budget < 1 ||
      config.max_budget > config.num_candidates) {
    throw ConfigError("certify: need instances >= 1 and 1 <= k_max <= m");
  }
  std::vector<std::vector<CertifyRow>> per_instance(config.instances);
  auto run_one = [&](int index) {
    const std::uint64_t seed = Rng::derive(config.seed, static_cast<std::uint64_t>(index));
    SyntheticSpec spec;
    spec.num_positions = config.num_positions;
    spec.num_candidates = config.num_candidates;
    spec.dimension = config.dimension;
    spec.extent.assign(config.dimension, config.extent);
    spec.trajectory = TrajectoryKind::kScatter;
    spec.prior_sigma = config.prior_sigma;
    spec.noise_variance = config.noise_variance;
    spec.cutoff = std::numeric_limits<double>::infinity();
    spec.budget = 1;
    const Scenario scenario =
        generate_synthetic_scenario(spec, Rng::derive(seed, "scenario"));
    InstanceOptions options;
    options.fim_mode = config.fim_mode;
    const TrialInstance instance = make_instance(scenario, seed, options);
    const Execution inner =
        execution == Execution::kParallel ? Execution::kSerial : execution;
    for (int k = 1; k <= config.max_budget; ++k) {
      const auto greedy = greedy_select(*instance.state, k, inner);
      const auto brute = brute_force_select(*instance.state, k,
                                            std::numeric_limits<std::uint64_t>::max(), inner);
      const auto cert = certify_bound(greedy, brute);
      CertifyRow row;
      row.instance = index;
      row.k = k;
      row.greedy = greedy.value();
      row.brute_force = brute.value();
      row.ratio = cert.ratio;
      row.holds = cert.holds;
      row.optimal = greedy.value() >=
                    brute.value() - 1e-9 * std::max(1.0, std::abs(brute.value()));
      per_instance[index].push_back(row);
    }
  };
  if (execution == Execution::kSerial) {
    for (int i = 0; i < config.instances; ++i) run_one(i);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < config.instances; ++i) run_one(i);
  }
  std::vector<CertifyRow> rows;
  for (auto& list : per_instance) rows.insert(rows.end(), list.begin(), list.end());
  return rows;
}

}  // namespace beacon
