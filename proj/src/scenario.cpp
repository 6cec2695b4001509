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

#include "beacon/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Cholesky>

#include "beacon/rng.hpp"

namespace beacon {
namespace {

bool same_values(const Mat& a, const Mat& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

std::string at(const char* array, int index, const char* field) {
  return std::string(array) + "[" + std::to_string(index) + "]." + field;
}

bool all_finite(const Mat& m) { return m.allFinite(); }

}  // namespace

bool operator==(const PositionSpec& a, const PositionSpec& b) {
  return same_values(a.prior_mean, b.prior_mean) &&
         same_values(a.prior_covariance, b.prior_covariance);
}

bool operator==(const BeaconCandidate& a, const BeaconCandidate& b) {
  return a.id == b.id && same_values(a.position, b.position);
}

double NoiseModel::variance(int position, int beacon_id) const {
  if (mode == NoiseMode::kPerEdgeTable) {
    auto it = table.find({position, beacon_id});
    if (it != table.end()) return it->second;
  }
  return constant_variance;
}

Mat cholesky_factor(const Mat& m, const char* what) {
  if (m.rows() != m.cols() || !all_finite(m)) {
    throw Error(std::string(what) + ": not a finite square matrix");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(std::string(what) + ": not symmetric");
  }
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(std::string(what) + ": not positive definite");
  }
  Mat l = llt.matrixL();
  if (!all_finite(l) || (l.diagonal().array() <= 0.0).any()) {
    throw Error(std::string(what) + ": not positive definite");
  }
  return l;
}

std::vector<Vec> Scenario::prior_means() const {
  std::vector<Vec> means;
  means.reserve(positions.size());
  for (const auto& p : positions) means.push_back(p.prior_mean);
  return means;
}

void Scenario::validate() const {
  if (dimension != 2 && dimension != 3) {
    throw Error("dimension: must be 2 or 3, got " + std::to_string(dimension));
  }
  if (positions.empty()) throw Error("positions: at least one required");
  if (candidates.empty()) throw Error("candidates: at least one required");
  if (budget < 1 || budget > num_candidates()) {
    throw Error("budget: must satisfy 1 <= K <= m (K=" +
                std::to_string(budget) +
                ", m=" + std::to_string(num_candidates()) + ")");
  }
  if (!(cutoff > 0.0)) throw Error("cutoff: must be positive");
  if (!(noise.constant_variance > 0.0) ||
      !std::isfinite(noise.constant_variance)) {
    throw Error("noise.constant_variance: must be positive and finite");
  }
  for (const auto& [key, variance] : noise.table) {
    if (!(variance > 0.0) || !std::isfinite(variance)) {
      throw Error("noise.table: variance for (" + std::to_string(key.first) +
                  ", " + std::to_string(key.second) + ") must be positive");
    }
    if (key.first < 0 || key.first >= num_positions() || key.second < 1 ||
        key.second > num_candidates()) {
      throw Error("noise.table: edge (" + std::to_string(key.first) + ", " +
                  std::to_string(key.second) + ") out of range");
    }
  }
  for (int i = 0; i < num_positions(); ++i) {
    const auto& p = positions[i];
    if (p.prior_mean.size() != dimension || !all_finite(p.prior_mean)) {
      throw Error(at("positions", i, "mean") + ": expected " +
                  std::to_string(dimension) + " finite coordinates");
    }
    if (p.prior_covariance.rows() != dimension ||
        p.prior_covariance.cols() != dimension) {
      throw Error(at("positions", i, "covariance") + ": expected " +
                  std::to_string(dimension) + "x" + std::to_string(dimension));
    }
    cholesky_factor(p.prior_covariance,
                    at("positions", i, "covariance").c_str());
  }
  for (int k = 0; k < num_candidates(); ++k) {
    const auto& c = candidates[k];
    if (c.id != k + 1) {
      throw Error(at("candidates", k, "id") +
                  ": ids must be 1..m in ascending order");
    }
    if (c.position.size() != dimension || !all_finite(c.position)) {
      throw Error(at("candidates", k, "position") + ": expected " +
                  std::to_string(dimension) + " finite coordinates");
    }
  }
}

bool MeasurementGraph::contains(int position, int beacon_id) const {
  const auto& nb = neighbourhood.at(position);
  return std::binary_search(nb.begin(), nb.end(), beacon_id);
}

MeasurementGraph MeasurementGraph::restricted_to(
    std::span<const int> beacon_ids) const {
  std::vector<char> keep(num_beacons + 1, 0);
  for (int id : beacon_ids) {
    if (id < 1 || id > num_beacons) {
      throw Error("unknown beacon id " + std::to_string(id));
    }
    keep[id] = 1;
  }
  MeasurementGraph out;
  out.num_positions = num_positions;
  out.num_beacons = num_beacons;
  out.neighbourhood.resize(num_positions);
  out.incident_positions.resize(num_beacons);
  for (const Edge& e : edges) {
    if (!keep[e.beacon]) continue;
    out.edges.push_back(e);
    out.neighbourhood[e.position].push_back(e.beacon);
    out.incident_positions[e.beacon - 1].push_back(e.position);
  }
  return out;
}

double MeasurementSet::range(int position, int beacon_id) const {
  auto it = std::lower_bound(
      ranges.begin(), ranges.end(), std::make_pair(position, beacon_id),
      [](const RangeMeasurement& r, const std::pair<int, int>& key) {
        return std::make_pair(r.position, r.beacon) < key;
      });
  if (it == ranges.end() || it->position != position ||
      it->beacon != beacon_id) {
    throw Error("no range measurement for edge (" + std::to_string(position) +
                ", " + std::to_string(beacon_id) + ")");
  }
  return it->range;
}

namespace {

MeasurementGraph build_graph_from(const Scenario& scenario,
                                  std::span<const Vec> points) {
  const int n = scenario.num_positions();
  const int m = scenario.num_candidates();
  if (static_cast<int>(points.size()) != n) {
    throw Error("build_graph: expected " + std::to_string(n) +
                " reference points, got " + std::to_string(points.size()));
  }
  MeasurementGraph g;
  g.num_positions = n;
  g.num_beacons = m;
  g.neighbourhood.resize(n);
  g.incident_positions.resize(m);
  for (int i = 0; i < n; ++i) {
    if (points[i].size() != scenario.dimension) {
      throw Error("build_graph: position " + std::to_string(i) +
                  " has dimension " + std::to_string(points[i].size()));
    }
    for (const BeaconCandidate& c : scenario.candidates) {
      if (c.position.size() != scenario.dimension) {
        throw Error("build_graph: candidate " + std::to_string(c.id) +
                    " has dimension " + std::to_string(c.position.size()));
      }
      const double dist = (points[i] - c.position).norm();
      if (!(dist <= scenario.cutoff)) continue;
      if (dist < kCoincidentTolerance) {
        g.dropped.emplace_back(i, c.id);
        continue;
      }
      g.edges.push_back({i, c.id, scenario.noise.variance(i, c.id)});
      g.neighbourhood[i].push_back(c.id);
      g.incident_positions[c.id - 1].push_back(i);
    }
  }
  return g;
}

}  // namespace

MeasurementGraph build_graph(const Scenario& scenario) {
  const auto means = scenario.prior_means();
  return build_graph_from(scenario, means);
}

MeasurementGraph build_graph(const Scenario& scenario,
                             std::span<const Vec> truth) {
  return build_graph_from(scenario, truth);
}

std::vector<Vec> sample_ground_truth(const Scenario& scenario,
                                     std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vec> truth;
  truth.reserve(scenario.positions.size());
  for (int i = 0; i < scenario.num_positions(); ++i) {
    const auto& p = scenario.positions[i];
    const Mat l = cholesky_factor(p.prior_covariance,
                                  at("positions", i, "covariance").c_str());
    Vec z(p.prior_mean.size());
    for (int k = 0; k < z.size(); ++k) z[k] = normal(rng);
    truth.push_back(p.prior_mean + l * z);
  }
  return truth;
}

MeasurementSet sample_measurements(const MeasurementGraph& graph,
                                   std::span<const Vec> truth,
                                   std::span<const BeaconCandidate> candidates,
                                   std::uint64_t seed) {
  if (static_cast<int>(truth.size()) != graph.num_positions) {
    throw Error("sample_measurements: truth has " +
                std::to_string(truth.size()) + " entries, graph has " +
                std::to_string(graph.num_positions) + " positions");
  }
  if (static_cast<int>(candidates.size()) != graph.num_beacons) {
    throw Error("sample_measurements: candidate count does not match graph");
  }
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  MeasurementSet out;
  out.ground_truth.assign(truth.begin(), truth.end());
  out.ranges.reserve(graph.edges.size());
  for (const Edge& e : graph.edges) {
    const double true_range =
        (truth[e.position] - candidates[e.beacon - 1].position).norm();
    const double noise = std::sqrt(e.variance) * normal(rng);
    out.ranges.push_back({e.position, e.beacon, true_range + noise});
  }
  return out;
}

}  // namespace beacon
