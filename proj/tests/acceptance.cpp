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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Pass criterion numbers as arguments to run
// a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "beacon/cmaes.hpp"
#include "beacon/export.hpp"
#include "beacon/harness.hpp"
#include "beacon/information.hpp"
#include "beacon/kernels.hpp"
#include "beacon/localization.hpp"
#include "beacon/scenario_io.hpp"
#include "beacon/selection.hpp"
#include "beacon/stats.hpp"
#include "oracles.hpp"

namespace beacon {
namespace {

using testing::RandomInstance;
using testing::random_instance;

struct Outcome {
  bool pass = true;
  std::string detail;
};

InfoState make_state(const RandomInstance& inst, FimMode mode) {
  return InfoState::create(inst.scenario, inst.graph, inst.truth, &inst.measurements, mode);
}

std::string fmt(const char* format, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

Outcome suboptimality_bound() {
  CertifyConfig config;  // 100 instances, d=3, n=10, m=20, K=1..7
  const auto rows = run_certification(config);
  int holds = 0;
  int optimal_pairs = 0;
  std::vector<bool> instance_optimal(config.instances, true);
  double min_ratio = 1.0;
  for (const auto& r : rows) {
    const bool bound = r.greedy >= kGreedyBound * r.brute_force - 1e-12;
    holds += bound;
    optimal_pairs += r.optimal;
    if (!r.optimal) instance_optimal[r.instance] = false;
    min_ratio = std::min(min_ratio, r.ratio);
  }
  const int optimal_instances =
      static_cast<int>(std::count(instance_optimal.begin(), instance_optimal.end(), true));
  const int pairs = static_cast<int>(rows.size());
  Outcome out;
  out.pass = pairs == config.instances * config.max_budget && holds == pairs &&
             optimal_instances >= (9 * config.instances + 9) / 10;
  out.detail = "bound held on " + std::to_string(holds) + "/" + std::to_string(pairs) +
               " (instance, K) pairs, min ratio " + fmt("%.4f", min_ratio) +
               "; greedy optimal for every K on " + std::to_string(optimal_instances) + "/" +
               std::to_string(config.instances) + " instances (" +
               std::to_string(optimal_pairs) + "/" + std::to_string(pairs) + " pairs)";
  return out;
}

Outcome objective_correctness() {
  std::mt19937_64 gen(2024);
  double worst = 0.0;
  int checks = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 2;
    const int n = 1 + static_cast<int>(gen() % (24 / d));
    const int m = 4 + static_cast<int>(gen() % 10);
    const auto inst = random_instance(50000 + trial, n, m, d, 70.0, 100.0, trial % 4 == 0);
    for (auto mode : {FimMode::kExpected, FimMode::kOneSample}) {
      std::vector<int> ids(m);
      for (int j = 0; j < m; ++j) ids[j] = j + 1;
      std::shuffle(ids.begin(), ids.end(), gen);
      ids.resize(gen() % (m + 1));
      auto state = make_state(inst, mode);
      for (int id : ids) state.apply(id);
      const double dense = testing::dense_objective(inst, ids, mode == FimMode::kOneSample);
      worst = std::max(worst, std::abs(state.objective() - dense) / std::abs(dense));
      ++checks;
    }
  }
  return {worst <= 1e-8, std::to_string(checks) + " subsets, max relative error " +
                             fmt("%.3e", worst)};
}

Outcome incremental_updates() {
  std::mt19937_64 gen(77);
  int pairs = 0;
  double worst = 0.0;
  for (int trial = 0; pairs < 1000; ++trial) {
    const int m = 12;
    const auto inst = random_instance(60000 + trial, 5, m, 2 + trial % 2, 60.0, 100.0,
                                      trial % 3 == 0);
    const auto mode = trial % 2 ? FimMode::kExpected : FimMode::kOneSample;
    const bool one = mode == FimMode::kOneSample;
    auto state = make_state(inst, mode);
    std::vector<int> chosen;
    for (int step = 0; step < 8 && pairs < 1000; ++step) {
      const int e = 1 + static_cast<int>(gen() % m);
      if (state.is_selected(e)) continue;
      auto with = chosen;
      with.push_back(e);
      const double expected = testing::dense_normalized(inst, with, one) -
                              testing::dense_normalized(inst, chosen, one);
      worst = std::max(worst, std::abs(state.marginal_gain(e) - expected));
      ++pairs;
      state.apply(e);
      chosen.push_back(e);
    }
  }
  return {worst <= 1e-9,
          std::to_string(pairs) + " (state, beacon) pairs, max error " + fmt("%.3e", worst)};
}

Outcome submodularity() {
  std::mt19937_64 gen(31);
  int violations = 0;
  int empty_nonzero = 0;
  int triples = 0;
  for (auto mode : {FimMode::kExpected, FimMode::kOneSample}) {
    for (int triple = 0; triple < 1000; ++triple) {
      const int m = 10;
      const auto inst = random_instance(70000 + triple, 4, m, 2 + triple % 2, 80.0, 100.0,
                                        triple % 5 == 0);
      std::vector<int> ids(m);
      for (int j = 0; j < m; ++j) ids[j] = j + 1;
      std::shuffle(ids.begin(), ids.end(), gen);
      const int b_size = static_cast<int>(gen() % m);
      const int a_size = static_cast<int>(gen() % (b_size + 1));
      const int e = ids[m - 1];
      auto a = make_state(inst, mode);
      if (a.normalized_objective() != 0.0) ++empty_nonzero;
      for (int k = 0; k < a_size; ++k) a.apply(ids[k]);
      auto b = a;
      for (int k = a_size; k < b_size; ++k) b.apply(ids[k]);
      const double gain_a = a.marginal_gain(e);
      const double gain_b = b.marginal_gain(e);
      if (gain_b < -1e-9 || gain_a < -1e-9) ++violations;
      if (gain_a - gain_b < -1e-9) ++violations;
      if (b.normalized_objective() - a.normalized_objective() < -1e-9) ++violations;
      ++triples;
    }
  }
  return {violations == 0 && empty_nonzero == 0,
          std::to_string(triples) + " triples over both modes, " + std::to_string(violations) +
              " violations, " + std::to_string(empty_nonzero) + " nonzero empty objectives"};
}

Outcome solver_correctness() {
  std::mt19937_64 gen(404);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_gradient = 0.0;
  for (int point = 0; point < 1000; ++point) {
    const int d = 2 + point % 2;
    PositionSpec prior{Vec(d), testing::random_spd(d, gen, 10.0 + 50.0 * unit(gen))};
    Vec x(d);
    for (int k = 0; k < d; ++k) {
      prior.prior_mean[k] = coord(gen);
      x[k] = coord(gen);
    }
    std::vector<RangeTerm> terms;
    const int count = 1 + static_cast<int>(gen() % 6);
    for (int j = 0; j < count; ++j) {
      Vec a(d);
      for (int k = 0; k < d; ++k) a[k] = coord(gen);
      terms.push_back({a, 80.0 * unit(gen), 1.0 + 30.0 * unit(gen)});
    }
    const double h = 1e-5;
    const auto map = map_derivatives(x, prior, terms);
    const auto fd_map = testing::central_gradient(
        [&](const Vec& y) { return map_objective(y, prior, terms); }, x, h);
    worst_gradient = std::max(
        worst_gradient, (Eigen::VectorXd(map.gradient) - fd_map).norm() / fd_map.norm());
    const auto mle = mle_derivatives(x, terms);
    const auto fd_mle = testing::central_gradient(
        [&](const Vec& y) { return mle_objective(y, terms); }, x, h);
    worst_gradient = std::max(
        worst_gradient, (Eigen::VectorXd(mle.gradient) - fd_mle).norm() / fd_mle.norm());
  }

  // Noiseless, well-posed batches through the full MAP and MLE pipelines.
  double worst_recovery = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = random_instance(80000 + trial, 6, 8, 2 + trial % 2, 1e9, 100.0);
    for (auto& r : inst.measurements.ranges) {
      r.range = (inst.truth[r.position] - inst.scenario.candidate(r.beacon).position).norm();
    }
    for (int i = 0; i < inst.scenario.num_positions(); ++i) {
      inst.scenario.positions[i].prior_mean = inst.truth[i];
    }
    std::vector<Vec> init = inst.truth;
    std::normal_distribution<double> offset(0.0, 2.0);
    for (auto& v : init) {
      for (Eigen::Index k = 0; k < v.size(); ++k) v[k] += offset(gen);
    }
    const auto map = map_solve(inst.scenario, inst.graph, inst.measurements, init);
    const auto mle = mle_solve(inst.scenario, inst.graph, inst.measurements, init);
    for (int i = 0; i < inst.scenario.num_positions(); ++i) {
      worst_recovery = std::max(worst_recovery, (map.estimates[i] - inst.truth[i]).norm());
      worst_recovery = std::max(worst_recovery, (mle.estimates[i] - inst.truth[i]).norm());
    }
  }

  // No measurements at all: the estimate is the prior mean, bit for bit.
  int prior_mismatch = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = random_instance(90000 + trial, 8, 5, 2 + trial % 2, 1e-3, 100.0);
    const auto empty = inst.graph.restricted_to(std::vector<int>{});
    const auto map = map_solve(inst.scenario, empty, inst.measurements, inst.truth);
    for (int i = 0; i < inst.scenario.num_positions(); ++i) {
      if (map.estimates[i] != inst.scenario.positions[i].prior_mean) ++prior_mismatch;
    }
  }
  Outcome out;
  out.pass = worst_gradient <= 1e-5 && worst_recovery <= 1e-6 && prior_mismatch == 0;
  out.detail = "gradient max rel error " + fmt("%.3e", worst_gradient) +
               " over 1000 points; noiseless recovery max error " +
               fmt("%.3e", worst_recovery) + " m; " + std::to_string(prior_mismatch) +
               " prior-mean mismatches";
  return out;
}

Outcome monte_carlo_weights() {
  std::mt19937_64 gen(5150);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int edges = 20;
  const int draws = 10000;
  double worst = 0.0;
  for (int e = 0; e < edges; ++e) {
    const int d = 2 + e % 2;
    Scenario s;
    s.dimension = d;
    Vec x(d), a(d);
    for (int k = 0; k < d; ++k) {
      x[k] = coord(gen);
      a[k] = coord(gen);
    }
    s.positions.push_back({x, Mat::Identity(d, d) * 64.0});
    s.candidates.push_back({1, a});
    s.noise.constant_variance = 1.0 + 49.0 * unit(gen);
    s.validate();
    const std::vector<Vec> truth = {x};
    const auto graph = build_graph(s, truth);
    const double var = s.noise.constant_variance;
    double sum = 0.0;
    for (int k = 0; k < draws; ++k) {
      const auto ms = sample_measurements(graph, truth, s.candidates,
                                          1'000'000ULL * (e + 1) + k);
      sum += edge_contribution(0, 1, x, a, var, FimMode::kOneSample, ms.range(0, 1)).weight;
    }
    worst = std::max(worst, std::abs(sum / draws * var - 1.0));
  }
  return {worst <= 0.05, std::to_string(edges) + " edges x " + std::to_string(draws) +
                             " draws, max relative deviation " + fmt("%.4f", worst)};
}

const SummaryRow* find_row(const ExperimentResult& result, const std::string& setting,
                           Algorithm alg) {
  for (const auto& r : result.summary) {
    if (r.setting == setting && r.algorithm == alg) return &r;
  }
  return nullptr;
}

std::vector<double> rmse_column(const ExperimentResult& result, const std::string& setting,
                                Algorithm alg) {
  std::vector<TrialRecord> rows;
  for (const auto& r : result.records) {
    if (r.setting == setting && r.algorithm == alg) rows.push_back(r);
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.trial < b.trial; });
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.rmse_m);
  return out;
}

Outcome table_trends() {
  const auto config = table_sweep_config();
  const auto result = run_experiment(config);
  Outcome out;
  std::ostringstream detail;
  if (result.failures != 0) {
    out.pass = false;
    detail << result.failures << " failed cells; ";
  }
  bool band = true;
  detail << "baseline means";
  for (auto alg : config.algorithms) {
    const auto* row = find_row(result, "baseline", alg);
    const double mean = row ? row->rmse_mean : NAN;
    band = band && mean >= 2.5 && mean <= 4.0;
    detail << ' ' << to_string(alg) << '=' << fmt("%.3f", mean);
  }
  detail << (band ? " (in [2.5, 4.0])" : " (outside [2.5, 4.0])");

  const auto greedy15 = rmse_column(result, "K=15", Algorithm::kGreedy);
  const auto coverage15 = rmse_column(result, "K=15", Algorithm::kCoverageGreedy);
  const auto test = stats::wilcoxon_less(greedy15, coverage15);
  const double g15 = stats::mean(greedy15);
  const double c15 = stats::mean(coverage15);
  const bool k15 = g15 < c15 && test.p_value < 0.05;
  detail << "; K=15 greedy " << fmt("%.3f", g15) << " vs coverage " << fmt("%.3f", c15)
         << " (Wilcoxon p=" << fmt("%.4g", test.p_value) << ")";

  const double g5 = find_row(result, "baseline", Algorithm::kGreedy)->rmse_mean;
  const double g10 = find_row(result, "K=10", Algorithm::kGreedy)->rmse_mean;
  const bool monotone = g5 > g10 && g10 > g15;
  detail << "; greedy over K=5,10,15: " << fmt("%.3f -> %.3f -> %.3f", g5, g10, g15)
         << (monotone ? " (decreasing)" : " (not decreasing)");
  out.pass = out.pass && band && k15 && monotone;
  out.detail = detail.str();
  return out;
}

Outcome cmaes_sanity() {
  SyntheticSpec spec;
  spec.num_positions = 10;
  spec.num_candidates = 20;
  spec.dimension = 3;
  spec.extent = {100.0, 100.0, 100.0};
  spec.trajectory = TrajectoryKind::kScatter;
  spec.cutoff = std::numeric_limits<double>::infinity();
  spec.budget = 5;
  int close = 0;
  int above_median = 0;
  const int instances = 25;
  double worst_gap = 0.0;
  for (int k = 0; k < instances; ++k) {
    const std::uint64_t seed = 7000 + k;
    const auto scenario = generate_synthetic_scenario(spec, seed);
    const auto inst = make_instance(scenario, seed, {});
    SelectorOptions options;
    const double brute = run_selector(inst, Algorithm::kBruteForce, seed, options).value();
    const double es = run_selector(inst, Algorithm::kCmaes, seed, options).value();
    std::vector<double> random_values;
    for (int r = 0; r < 101; ++r) {
      random_values.push_back(run_selector(inst, Algorithm::kRandom, seed * 1000 + r,
                                           options).value());
    }
    std::nth_element(random_values.begin(), random_values.begin() + 50, random_values.end());
    const double median = random_values[50];
    if (es >= 0.95 * brute) ++close;
    if (es >= median) ++above_median;
    worst_gap = std::max(worst_gap, 1.0 - es / brute);
  }
  return {close * 5 >= instances * 4 && above_median == instances,
          "within 5% of brute force on " + std::to_string(close) + "/" +
              std::to_string(instances) + " (worst gap " + fmt("%.2f%%", 100 * worst_gap) +
              "), at or above the random median on " + std::to_string(above_median) + "/" +
              std::to_string(instances)};
}

// Every CSV the library emits, concatenated, from one fresh set of runs.
std::string all_csv(std::uint64_t seed) {
  std::string out;
  ExperimentConfig config;
  config.synthetic.num_candidates = 16;
  config.settings = {{"baseline", 3, 250.0, 8.0}, {"K=4", 4, std::nullopt, std::nullopt}};
  config.trials = 6;
  config.master_seed = seed;
  config.algorithms = {Algorithm::kRandom,        Algorithm::kGreedy,
                       Algorithm::kMeasurementGreedy, Algorithm::kCoverageGreedy,
                       Algorithm::kBruteForce,    Algorithm::kCmaes};
  const auto result = run_experiment(config);
  out += records_csv(result.records);
  out += summary_csv(result.summary);

  CertifyConfig certify;
  certify.instances = 5;
  certify.num_candidates = 12;
  certify.max_budget = 4;
  certify.seed = seed;
  out += certify_csv(run_certification(certify));

  const auto scenario = generate_synthetic_scenario(config.synthetic, seed);
  const auto inst = make_instance(scenario, seed, {});
  out += measurements_csv(inst.measurements);
  std::vector<EsGeneration> trace;
  EsConfig es;
  es.seed = seed;
  cmaes_select(inst.scenario, *inst.state, 4, es, &trace);
  out += es_trace_csv(trace);
  const auto selection = greedy_select(*inst.state, 4);
  const auto graph = inst.graph.restricted_to(selection.selected);
  out += diagnostics_csv(map_solve(inst.scenario, graph, inst.measurements,
                                   inst.scenario.prior_means()));
  return out;
}

Outcome determinism() {
  const std::string a = all_csv(42);
  const std::string b = all_csv(42);
  const std::string c = all_csv(43);
  return {a == b && a != c, std::to_string(a.size()) + " bytes of CSV; rerun " +
                                (a == b ? "identical" : "differs") + ", other seed " +
                                (a != c ? "differs" : "identical")};
}

}  // namespace
}  // namespace beacon

int main(int argc, char** argv) {
  using beacon::Outcome;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"suboptimality bound", beacon::suboptimality_bound},
      {"objective correctness", beacon::objective_correctness},
      {"incremental updates", beacon::incremental_updates},
      {"submodularity and monotonicity", beacon::submodularity},
      {"solver correctness", beacon::solver_correctness},
      {"one-sample weight Monte-Carlo", beacon::monte_carlo_weights},
      {"table trends", beacon::table_trends},
      {"CMA-ES sanity", beacon::cmaes_sanity},
      {"determinism", beacon::determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int number = static_cast<int>(k) + 1;
    if (!wanted.empty() && !wanted.count(number)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[k].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d (%s): %s - %s [%.1fs]\n", number, criteria[k].first,
                outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str(), seconds);
    std::fflush(stdout);
    failed += !outcome.pass;
  }
  return failed == 0 ? 0 : 1;
}
