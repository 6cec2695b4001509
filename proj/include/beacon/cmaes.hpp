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

#ifndef BEACON_CMAES_HPP_
#define BEACON_CMAES_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "beacon/information.hpp"
#include "beacon/scenario.hpp"
#include "beacon/selection.hpp"
#include "beacon/types.hpp"

namespace beacon {

struct EsConfig {
  int population_size = 0;    // 0: 2 (4 + floor(3 ln(dK)))
  double initial_step = 0.0;  // 0: 0.3 x candidate bounding-box diagonal
  std::int64_t max_evaluations = 3000;
  double stagnation_tolerance = 1e-9;
  int stagnation_window = 20;
  int max_restarts = 3;
  std::uint64_t seed = 0;

  // Throws ConfigError on invalid settings.
  void validate() const;
};

// Per-generation progress, exportable for convergence plots.
struct EsGeneration {
  int generation = 0;
  std::int64_t evaluations = 0;
  double generation_best = 0.0;
  double best_so_far = 0.0;
  double step_size = 0.0;
};

// Assigns each of the K slots of `stacked` (K consecutive d-vectors) to the
// nearest candidate not claimed by an earlier slot; ties go to the lower id.
std::vector<int> snap_to_candidates(std::span<const double> stacked,
                                    std::span<const BeaconCandidate> candidates,
                                    int dimension);

// (mu/mu_w, lambda)-CMA-ES over stacked beacon coordinates in R^(dK),
// maximizing the normalized objective of the snapped subset. Returns the best
// subset evaluated. `state` must have an empty selection.
SelectionResult cmaes_select(const Scenario& scenario, const InfoState& state,
                             int budget, const EsConfig& config,
                             std::vector<EsGeneration>* trace = nullptr,
                             Execution execution = Execution::kParallel);

std::string es_trace_csv(std::span<const EsGeneration> trace);

}  // namespace beacon

#endif  // BEACON_CMAES_HPP_
