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

#ifndef BEACON_LOCALIZATION_HPP_
#define BEACON_LOCALIZATION_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "beacon/scenario.hpp"
#include "beacon/types.hpp"

namespace beacon {

enum class Damping { kNone, kAdaptiveLevenberg };

struct SolveOptions {
  double gradient_tolerance = 1e-9;
  double step_tolerance = 1e-12;
  int max_iterations = 100;
  Damping damping = Damping::kAdaptiveLevenberg;
};

enum class SolveStatus { kConverged, kMaxIterations, kUnderdetermined };

std::string_view to_string(SolveStatus status);

// One range to a known beacon.
struct RangeTerm {
  Vec beacon;
  double range = 0.0;
  double variance = 1.0;
};

struct ObjectiveDerivatives {
  double value = 0.0;
  Vec gradient;
  Mat hessian;
};

// (x - mean)^T Sigma^-1 (x - mean) + sum_j (||x - a_j|| - d_j)^2 / sigma_j^2
double map_objective(const Vec& x, const PositionSpec& prior,
                     std::span<const RangeTerm> terms);
// The range sum alone.
double mle_objective(const Vec& x, std::span<const RangeTerm> terms);

// Analytic gradient and Hessian. Non-finite when x sits on a beacon.
ObjectiveDerivatives map_derivatives(const Vec& x, const PositionSpec& prior,
                                     std::span<const RangeTerm> terms);
ObjectiveDerivatives mle_derivatives(const Vec& x,
                                     std::span<const RangeTerm> terms);

struct PositionSolve {
  Vec estimate;
  SolveStatus status = SolveStatus::kConverged;
  int iterations = 0;
  double gradient_norm = 0.0;
};

// Damped Newton on one position. `prior` null solves the MLE problem.
PositionSolve solve_position(const Vec& init, const PositionSpec* prior,
                             std::span<const RangeTerm> terms,
                             const SolveOptions& options);

struct LocalizationResult {
  std::vector<Vec> estimates;
  std::vector<bool> converged;
  std::vector<int> iterations;
  std::vector<double> final_gradient_norms;
  std::vector<SolveStatus> status;

  bool all_converged() const;
};

// Range terms of position i over the graph's edges.
std::vector<RangeTerm> range_terms(const Scenario& scenario,
                                   const MeasurementGraph& graph,
                                   const MeasurementSet& measurements,
                                   int position);

// Each position is solved independently against the measurements on the
// graph's edges (pass a graph restricted to the selected beacons).
LocalizationResult map_solve(const Scenario& scenario,
                             const MeasurementGraph& graph,
                             const MeasurementSet& measurements,
                             std::span<const Vec> init,
                             const SolveOptions& options = {},
                             Execution execution = Execution::kParallel);

LocalizationResult mle_solve(const Scenario& scenario,
                             const MeasurementGraph& graph,
                             const MeasurementSet& measurements,
                             std::span<const Vec> init,
                             const SolveOptions& options = {},
                             Execution execution = Execution::kParallel);

double rmse(std::span<const Vec> estimates, std::span<const Vec> truth);

nlohmann::json to_json(const LocalizationResult& result);
// Per-position diagnostics: i,converged,iterations,gradient_norm,status,x,y[,z]
std::string diagnostics_csv(const LocalizationResult& result);

}  // namespace beacon

#endif  // BEACON_LOCALIZATION_HPP_
