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

#ifndef BEACON_SELECTION_HPP_
#define BEACON_SELECTION_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "beacon/information.hpp"
#include "beacon/scenario.hpp"
#include "beacon/types.hpp"

namespace beacon {

enum class Algorithm {
  kGreedy,
  kBruteForce,
  kMeasurementGreedy,
  kCoverageGreedy,
  kRandom,
  kCmaes,
};

std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view text);
// Comma-separated list, e.g. "greedy,random".
std::vector<Algorithm> parse_algorithms(std::string_view text);

struct SelectionResult {
  Algorithm algorithm = Algorithm::kGreedy;
  std::vector<int> selected;            // pick order
  std::vector<double> objective_trace;  // normalized objective after each pick
  double wall_time_s = 0.0;
  std::int64_t evaluations = 0;
  int budget = 0;
  std::uint64_t instance = 0;  // InfoState::fingerprint() of the instance
  std::map<std::string, double> metadata;

  double value() const {
    return objective_trace.empty() ? 0.0 : objective_trace.back();
  }
};

nlohmann::json to_json(const SelectionResult& result);
SelectionResult selection_from_json(const nlohmann::json& doc);

inline constexpr std::uint64_t kDefaultBruteForceCap = 1'000'000;

// Plain greedy: K rounds, each adding the beacon of largest marginal gain,
// lowest id on ties.
SelectionResult greedy_select(const InfoState& state, int budget,
                              Execution execution = Execution::kParallel);

// Exhaustive search; throws Error with the subset count when C(m, K) > cap.
SelectionResult brute_force_select(
    const InfoState& state, int budget,
    std::uint64_t cap = kDefaultBruteForceCap,
    Execution execution = Execution::kParallel);

// Largest neighbourhood first, lowest id on ties.
SelectionResult measurement_greedy_select(const MeasurementGraph& graph,
                                          int budget);

// Covers as many positions as possible first, then falls back to the
// measurement-greedy rule for the remaining budget.
SelectionResult coverage_greedy_select(const MeasurementGraph& graph,
                                       int budget);

SelectionResult random_select(const MeasurementGraph& graph, int budget,
                              std::uint64_t seed);

// Fills objective_trace (and instance) for a selection made without looking
// at the objective. `state` must have an empty selection.
void annotate_objective(SelectionResult& result, const InfoState& state);

struct BoundCertificate {
  double ratio = 1.0;
  bool holds = true;
};

inline constexpr double kGreedyBound = 0.63212055882855767;  // 1 - 1/e

// Throws Error if the results come from different instances or budgets.
BoundCertificate certify_bound(const SelectionResult& greedy,
                               const SelectionResult& brute);

}  // namespace beacon

#endif  // BEACON_SELECTION_HPP_
