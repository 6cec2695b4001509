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

#include "beacon/selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "beacon/kernels.hpp"
#include "beacon/rng.hpp"

namespace beacon {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_budget(int budget, int m) {
  if (budget < 1 || budget > m) {
    throw Error("budget: must satisfy 1 <= K <= m (K=" + std::to_string(budget) +
                ", m=" + std::to_string(m) + ")");
  }
}

// Index of the maximum over `score`, skipping `taken`; lowest index on ties.
template <typename Score>
int argmax_lowest(int m, const std::vector<char>& taken, Score score) {
  int best = -1;
  decltype(score(1)) best_score{};
  for (int id = 1; id <= m; ++id) {
    if (taken[id]) continue;
    const auto s = score(id);
    if (best < 0 || s > best_score) {
      best = id;
      best_score = s;
    }
  }
  return best;
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kGreedy: return "greedy";
    case Algorithm::kBruteForce: return "brute_force";
    case Algorithm::kMeasurementGreedy: return "measurement_greedy";
    case Algorithm::kCoverageGreedy: return "coverage_greedy";
    case Algorithm::kRandom: return "random";
    case Algorithm::kCmaes: return "cmaes";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view text) {
  for (Algorithm a : {Algorithm::kGreedy, Algorithm::kBruteForce,
                      Algorithm::kMeasurementGreedy, Algorithm::kCoverageGreedy,
                      Algorithm::kRandom, Algorithm::kCmaes}) {
    if (text == to_string(a)) return a;
  }
  throw ConfigError("algorithm: unknown algorithm \"" + std::string(text) + "\"");
}

std::vector<Algorithm> parse_algorithms(std::string_view text) {
  std::vector<Algorithm> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const auto token = text.substr(
        start, comma == std::string_view::npos ? std::string_view::npos
                                               : comma - start);
    if (!token.empty()) out.push_back(parse_algorithm(token));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("algorithms: empty list");
  return out;
}

nlohmann::json to_json(const SelectionResult& r) {
  nlohmann::json doc;
  doc["algorithm"] = to_string(r.algorithm);
  doc["selected"] = r.selected;
  doc["objective_trace"] = r.objective_trace;
  doc["wall_time_s"] = r.wall_time_s;
  doc["evaluations"] = r.evaluations;
  doc["budget"] = r.budget;
  if (!r.metadata.empty()) doc["metadata"] = r.metadata;
  return doc;
}

SelectionResult selection_from_json(const nlohmann::json& doc) {
  SelectionResult r;
  try {
    r.algorithm = parse_algorithm(doc.at("algorithm").get<std::string>());
    r.selected = doc.at("selected").get<std::vector<int>>();
    r.objective_trace = doc.value("objective_trace", std::vector<double>{});
    r.wall_time_s = doc.value("wall_time_s", 0.0);
    r.evaluations = doc.value("evaluations", std::int64_t{0});
    r.budget = doc.value("budget", static_cast<int>(r.selected.size()));
    if (doc.contains("metadata")) {
      r.metadata = doc.at("metadata").get<std::map<std::string, double>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("selection: ") + e.what());
  }
  return r;
}

SelectionResult greedy_select(const InfoState& state, int budget,
                              Execution execution) {
  const auto start = Clock::now();
  const int m = state.num_beacons();
  check_budget(budget, m);
  SelectionResult result;
  result.algorithm = Algorithm::kGreedy;
  result.budget = budget;
  result.instance = state.fingerprint();

  InfoState work = state;
  std::vector<double> gains(m);
  for (int round = 0; round < budget; ++round) {
    kernels::compute_gains(work, gains, execution);
    int best = -1;
    for (int id = 1; id <= m; ++id) {
      if (work.is_selected(id)) continue;
      ++result.evaluations;
      if (best < 0 || gains[id - 1] > gains[best - 1]) best = id;
    }
    if (best < 0) break;
    work.apply(best);
    result.selected.push_back(best);
    result.objective_trace.push_back(work.normalized_objective());
  }
  result.wall_time_s = seconds_since(start);
  return result;
}

SelectionResult brute_force_select(const InfoState& state, int budget,
                                   std::uint64_t cap, Execution execution) {
  const auto start = Clock::now();
  const int m = state.num_beacons();
  check_budget(budget, m);
  const std::uint64_t count = kernels::binomial(m, budget);
  if (count > cap) {
    throw Error("brute force refused: C(" + std::to_string(m) + ", " +
                std::to_string(budget) + ") = " + std::to_string(count) +
                " subsets exceeds the cap of " + std::to_string(cap));
  }
  const auto optimum = kernels::best_subset(state, budget, execution);
  SelectionResult result;
  result.algorithm = Algorithm::kBruteForce;
  result.budget = budget;
  result.instance = state.fingerprint();
  result.selected = optimum.ids;
  result.evaluations = static_cast<std::int64_t>(optimum.subsets_evaluated);
  InfoState work = state;
  for (int id : result.selected) {
    work.apply(id);
    result.objective_trace.push_back(work.normalized_objective());
  }
  result.metadata["search_value"] = optimum.value;
  result.wall_time_s = seconds_since(start);
  return result;
}

SelectionResult measurement_greedy_select(const MeasurementGraph& graph,
                                          int budget) {
  const auto start = Clock::now();
  const int m = graph.num_beacons;
  check_budget(budget, m);
  SelectionResult result;
  result.algorithm = Algorithm::kMeasurementGreedy;
  result.budget = budget;
  std::vector<char> taken(m + 1, 0);
  for (int round = 0; round < budget; ++round) {
    const int best = argmax_lowest(m, taken, [&](int id) {
      return graph.degree(id);
    });
    result.evaluations += m - round;
    taken[best] = 1;
    result.selected.push_back(best);
  }
  result.wall_time_s = seconds_since(start);
  return result;
}

SelectionResult coverage_greedy_select(const MeasurementGraph& graph,
                                       int budget) {
  const auto start = Clock::now();
  const int m = graph.num_beacons;
  check_budget(budget, m);
  SelectionResult result;
  result.algorithm = Algorithm::kCoverageGreedy;
  result.budget = budget;
  std::vector<char> taken(m + 1, 0);
  std::vector<char> covered(graph.num_positions, 0);
  int num_covered = 0;

  auto new_coverage = [&](int id) {
    int count = 0;
    for (int i : graph.incident_positions[id - 1]) count += covered[i] ? 0 : 1;
    return count;
  };
  int phase_one_picks = 0;
  while (static_cast<int>(result.selected.size()) < budget &&
         num_covered < graph.num_positions) {
    const int best = argmax_lowest(m, taken, new_coverage);
    result.evaluations += m - static_cast<int>(result.selected.size());
    if (best < 0 || new_coverage(best) == 0) break;
    taken[best] = 1;
    result.selected.push_back(best);
    for (int i : graph.incident_positions[best - 1]) {
      if (!covered[i]) {
        covered[i] = 1;
        ++num_covered;
      }
    }
    ++phase_one_picks;
  }
  while (static_cast<int>(result.selected.size()) < budget) {
    const int best = argmax_lowest(m, taken, [&](int id) {
      return graph.degree(id);
    });
    result.evaluations += m - static_cast<int>(result.selected.size());
    taken[best] = 1;
    result.selected.push_back(best);
  }
  result.metadata["coverage_picks"] = phase_one_picks;
  result.metadata["positions_covered"] = num_covered;
  result.wall_time_s = seconds_since(start);
  return result;
}

SelectionResult random_select(const MeasurementGraph& graph, int budget,
                              std::uint64_t seed) {
  const auto start = Clock::now();
  const int m = graph.num_beacons;
  check_budget(budget, m);
  SelectionResult result;
  result.algorithm = Algorithm::kRandom;
  result.budget = budget;
  std::vector<int> ids(m);
  std::iota(ids.begin(), ids.end(), 1);
  Rng rng(seed);
  std::sample(ids.begin(), ids.end(), std::back_inserter(result.selected),
              budget, rng);
  result.evaluations = 0;
  result.wall_time_s = seconds_since(start);
  return result;
}

void annotate_objective(SelectionResult& result, const InfoState& state) {
  if (!state.selected().empty()) {
    throw Error("annotate_objective: state must have an empty selection");
  }
  InfoState work = state;
  result.objective_trace.clear();
  for (int id : result.selected) {
    work.apply(id);
    result.objective_trace.push_back(work.normalized_objective());
  }
  result.instance = state.fingerprint();
}

BoundCertificate certify_bound(const SelectionResult& greedy,
                               const SelectionResult& brute) {
  if (greedy.instance != brute.instance) {
    throw Error("certify_bound: results come from different instances");
  }
  if (greedy.budget != brute.budget) {
    throw Error("certify_bound: results use different budgets");
  }
  BoundCertificate cert;
  const double optimum = brute.value();
  if (optimum > 0.0) {
    cert.ratio = greedy.value() / optimum;
    cert.holds = cert.ratio >= kGreedyBound - 1e-9;
  }
  return cert;
}

}  // namespace beacon
