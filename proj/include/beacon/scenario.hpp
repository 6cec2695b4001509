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

#ifndef BEACON_SCENARIO_HPP_
#define BEACON_SCENARIO_HPP_

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "beacon/types.hpp"

namespace beacon {

// An unknown position with a Gaussian prior.
struct PositionSpec {
  Vec prior_mean;
  Mat prior_covariance;

  friend bool operator==(const PositionSpec& a, const PositionSpec& b);
};

struct BeaconCandidate {
  int id = 0;  // 1-based, contiguous over the candidate set
  Vec position;

  friend bool operator==(const BeaconCandidate& a, const BeaconCandidate& b);
};

enum class NoiseMode { kConstant, kPerEdgeTable };

struct NoiseModel {
  NoiseMode mode = NoiseMode::kConstant;
  double constant_variance = 25.0;
  // (position index, beacon id) -> range variance. Edges absent from the
  // table fall back to constant_variance.
  std::map<std::pair<int, int>, double> table;

  double variance(int position, int beacon_id) const;

  bool operator==(const NoiseModel&) const = default;
};

struct Scenario {
  int dimension = 2;
  std::vector<PositionSpec> positions;
  std::vector<BeaconCandidate> candidates;  // sorted by id
  NoiseModel noise;
  double cutoff = std::numeric_limits<double>::infinity();
  int budget = 1;

  int num_positions() const { return static_cast<int>(positions.size()); }
  int num_candidates() const { return static_cast<int>(candidates.size()); }
  const BeaconCandidate& candidate(int id) const { return candidates.at(id - 1); }

  std::vector<Vec> prior_means() const;

  // Throws Error naming the offending field.
  void validate() const;

  bool operator==(const Scenario&) const = default;
};

// Which point of a position decides whether it is within cutoff of a beacon.
enum class EdgeReference { kGroundTruth, kPriorMean };

struct Edge {
  int position = 0;
  int beacon = 0;  // id
  double variance = 0.0;

  bool operator==(const Edge&) const = default;
};

// Bipartite position/beacon adjacency. Edges are sorted by (position, beacon).
struct MeasurementGraph {
  int num_positions = 0;
  int num_beacons = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> neighbourhood;       // position -> beacon ids
  std::vector<std::vector<int>> incident_positions;  // beacon id - 1 -> positions
  // Edges within cutoff that were dropped because the points coincide.
  std::vector<std::pair<int, int>> dropped;

  int degree(int beacon_id) const {
    return static_cast<int>(incident_positions.at(beacon_id - 1).size());
  }
  bool contains(int position, int beacon_id) const;

  // Keeps only edges incident to the given beacon ids.
  MeasurementGraph restricted_to(std::span<const int> beacon_ids) const;
};

struct RangeMeasurement {
  int position = 0;
  int beacon = 0;
  double range = 0.0;

  bool operator==(const RangeMeasurement&) const = default;
};

struct MeasurementSet {
  std::vector<Vec> ground_truth;
  std::vector<RangeMeasurement> ranges;  // same order as the graph's edges

  // Throws Error if (position, beacon) was not measured.
  double range(int position, int beacon_id) const;
};

inline constexpr double kCoincidentTolerance = 1e-9;

// Builds the graph against the prior means.
MeasurementGraph build_graph(const Scenario& scenario);
// Builds the graph against the supplied ground truth.
MeasurementGraph build_graph(const Scenario& scenario,
                             std::span<const Vec> truth);

std::vector<Vec> sample_ground_truth(const Scenario& scenario,
                                     std::uint64_t seed);

MeasurementSet sample_measurements(const MeasurementGraph& graph,
                                   std::span<const Vec> truth,
                                   std::span<const BeaconCandidate> candidates,
                                   std::uint64_t seed);

// Lower Cholesky factor; throws Error if the matrix is not SPD.
Mat cholesky_factor(const Mat& m, const char* what);

}  // namespace beacon

#endif  // BEACON_SCENARIO_HPP_
