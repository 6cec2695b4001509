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

// Independent reference computations for the tests. Nothing here calls into
// the incremental information state, the subset kernels or the solvers.

#ifndef BEACON_TESTS_ORACLES_HPP_
#define BEACON_TESTS_ORACLES_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "beacon/scenario.hpp"

namespace beacon::testing {

// A random well-conditioned instance drawn with the standard library engine.
struct RandomInstance {
  Scenario scenario;
  std::vector<Vec> truth;
  MeasurementGraph graph;
  MeasurementSet measurements;
};

inline Mat random_spd(int d, std::mt19937_64& gen, double scale) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd a(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) a(r, c) = normal(gen);
  }
  Eigen::MatrixXd s = a * a.transpose() / d + Eigen::MatrixXd::Identity(d, d);
  return Mat(s * scale);
}

inline RandomInstance random_instance(std::uint64_t seed, int n, int m, int d,
                                      double cutoff = 60.0, double extent = 100.0,
                                      bool per_edge_noise = false) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RandomInstance out;
  Scenario& s = out.scenario;
  s.dimension = d;
  s.cutoff = cutoff;
  s.budget = 1;
  for (int i = 0; i < n; ++i) {
    Vec mean(d);
    for (int k = 0; k < d; ++k) mean[k] = extent * unit(gen);
    s.positions.push_back({mean, random_spd(d, gen, 4.0 + 60.0 * unit(gen))});
  }
  for (int j = 1; j <= m; ++j) {
    Vec p(d);
    for (int k = 0; k < d; ++k) p[k] = extent * unit(gen);
    s.candidates.push_back({j, p});
  }
  s.noise.constant_variance = 4.0 + 30.0 * unit(gen);
  if (per_edge_noise) {
    s.noise.mode = NoiseMode::kPerEdgeTable;
    for (int i = 0; i < n; ++i) {
      for (int j = 1; j <= m; ++j) {
        if (unit(gen) < 0.5) s.noise.table[{i, j}] = 1.0 + 40.0 * unit(gen);
      }
    }
  }
  s.validate();
  out.truth = sample_ground_truth(s, seed ^ 0x5bd1e995ULL);
  out.graph = build_graph(s, out.truth);
  out.measurements = sample_measurements(out.graph, out.truth, s.candidates,
                                         seed ^ 0x9e3779b9ULL);
  return out;
}

// Range variance straight from the noise description.
inline double oracle_variance(const Scenario& s, int i, int j) {
  if (s.noise.mode == NoiseMode::kPerEdgeTable) {
    auto it = s.noise.table.find({i, j});
    if (it != s.noise.table.end()) return it->second;
  }
  return s.noise.constant_variance;
}

// Dense nd x nd information matrix of a beacon subset. Edges are decided by
// scanning distances, not by the graph.
inline Eigen::MatrixXd dense_information(const RandomInstance& inst,
                                         const std::vector<int>& ids,
                                         bool one_sample) {
  const Scenario& s = inst.scenario;
  const int n = s.num_positions();
  const int d = s.dimension;
  Eigen::MatrixXd j_full = Eigen::MatrixXd::Zero(n * d, n * d);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd cov = s.positions[i].prior_covariance;
    j_full.block(i * d, i * d, d, d) = cov.inverse();
  }
  for (int id : ids) {
    const Eigen::VectorXd a = s.candidates[id - 1].position;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd x = inst.truth[i];
      const double dist = (x - a).norm();
      if (dist > s.cutoff) continue;
      const Eigen::VectorXd u = (x - a) / dist;
      const double var = oracle_variance(s, i, id);
      double w = 1.0 / var;
      if (one_sample) {
        double measured = 0.0;
        for (const auto& r : inst.measurements.ranges) {
          if (r.position == i && r.beacon == id) measured = r.range;
        }
        const double res = dist - measured;
        w = res * res / (var * var);
      }
      j_full.block(i * d, i * d, d, d) += w * u * u.transpose();
    }
  }
  return j_full;
}

// log |det| through partial-pivot LU, a different factorization from the
// Cholesky route under test.
inline double lu_log_det(const Eigen::MatrixXd& m) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::MatrixXd& u = lu.matrixLU();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < u.rows(); ++k) sum += std::log(std::abs(u(k, k)));
  return sum;
}

inline double dense_objective(const RandomInstance& inst, const std::vector<int>& ids,
                              bool one_sample) {
  return lu_log_det(dense_information(inst, ids, one_sample));
}

inline double dense_normalized(const RandomInstance& inst, const std::vector<int>& ids,
                               bool one_sample) {
  return dense_objective(inst, ids, one_sample) - dense_objective(inst, {}, one_sample);
}

struct NaiveOptimum {
  std::vector<int> ids;
  double value = -1.0;
};

// Every k-subset by bitmask, scored with the dense objective. m <= 20.
inline NaiveOptimum naive_best_subset(const RandomInstance& inst, int k,
                                      bool one_sample) {
  const int m = inst.scenario.num_candidates();
  NaiveOptimum best;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<int> ids;
    for (int j = 0; j < m; ++j) {
      if (mask & (1u << j)) ids.push_back(j + 1);
    }
    const double v = dense_normalized(inst, ids, one_sample);
    if (v > best.value) best = {ids, v};
  }
  return best;
}

// Central differences of a scalar field.
inline Eigen::VectorXd central_gradient(const std::function<double(const Vec&)>& f,
                                        const Vec& x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec lo = x;
    Vec hi = x;
    lo[k] -= h;
    hi[k] += h;
    g[k] = (f(hi) - f(lo)) / (2.0 * h);
  }
  return g;
}

inline double naive_mean(const std::vector<double>& v) {
  long double s = 0.0;
  for (double x : v) s += x;
  return static_cast<double>(s / v.size());
}

inline double naive_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mu = naive_mean(v);
  long double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return std::sqrt(static_cast<double>(s / (v.size() - 1)));
}

}  // namespace beacon::testing

#endif  // BEACON_TESTS_ORACLES_HPP_
