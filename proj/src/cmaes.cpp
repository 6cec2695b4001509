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

#include "beacon/cmaes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "beacon/rng.hpp"
#include "beacon/scenario_io.hpp"

namespace beacon {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum StopReason { kMaxEvaluations = 1, kStagnation = 2, kRestartLimit = 3 };

// Strategy parameters of the canonical CMA-ES tutorial defaults.
struct Strategy {
  int n = 0;
  int lambda = 0;
  int mu = 0;
  VectorXd weights;
  double mu_eff = 0.0;
  double c_c = 0.0;
  double c_sigma = 0.0;
  double c_1 = 0.0;
  double c_mu = 0.0;
  double d_sigma = 0.0;
  double chi_n = 0.0;

  Strategy(int dim, int population) : n(dim) {
    lambda = population > 0
                 ? population
                 : 2 * (4 + static_cast<int>(std::floor(3.0 * std::log(dim))));
    mu = lambda / 2;
    weights.resize(mu);
    for (int i = 0; i < mu; ++i) {
      weights[i] = std::log((lambda + 1) / 2.0) - std::log(i + 1.0);
    }
    weights /= weights.sum();
    mu_eff = 1.0 / weights.squaredNorm();
    const double nd = n;
    c_c = (4.0 + mu_eff / nd) / (nd + 4.0 + 2.0 * mu_eff / nd);
    c_sigma = (mu_eff + 2.0) / (nd + mu_eff + 5.0);
    c_1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mu_eff);
    c_mu = std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) /
                                   ((nd + 2.0) * (nd + 2.0) + mu_eff));
    d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (nd + 1.0)) - 1.0) +
              c_sigma;
    chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));
  }
};

struct Distribution {
  VectorXd mean;
  double sigma = 0.0;
  MatrixXd cov;
  MatrixXd basis;   // eigenvectors of cov
  VectorXd scales;  // square roots of the eigenvalues
  VectorXd path_sigma;
  VectorXd path_c;
  int generation = 0;

  // Returns false if the covariance is no longer positive definite.
  bool decompose() {
    if (!cov.allFinite()) return false;
    cov = 0.5 * (cov + cov.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) return false;
    if (!(eig.eigenvalues().minCoeff() > 0.0)) return false;
    basis = eig.eigenvectors();
    scales = eig.eigenvalues().cwiseSqrt();
    return std::isfinite(sigma) && sigma > 0.0;
  }
};

VectorXd random_subset_mean(std::span<const BeaconCandidate> candidates,
                            int budget, int dim, Rng& rng) {
  std::vector<int> ids(candidates.size());
  std::iota(ids.begin(), ids.end(), 1);
  std::shuffle(ids.begin(), ids.end(), rng);
  VectorXd mean(dim * budget);
  for (int s = 0; s < budget; ++s) {
    mean.segment(s * dim, dim) = candidates[ids[s] - 1].position;
  }
  return mean;
}

}  // namespace

void EsConfig::validate() const {
  if (population_size != 0 && population_size < 4) {
    throw ConfigError("es.population_size: must be >= 4");
  }
  if (initial_step < 0.0) throw ConfigError("es.initial_step: must be positive");
  if (max_evaluations < std::max(population_size, 4)) {
    throw ConfigError("es.max_evaluations: must be >= population size");
  }
  if (!(stagnation_tolerance > 0.0)) {
    throw ConfigError("es.stagnation_tolerance: must be positive");
  }
  if (stagnation_window < 1) throw ConfigError("es.stagnation_window: must be >= 1");
  if (max_restarts < 0) throw ConfigError("es.max_restarts: must be >= 0");
}

std::vector<int> snap_to_candidates(std::span<const double> stacked,
                                    std::span<const BeaconCandidate> candidates,
                                    int dimension) {
  const int m = static_cast<int>(candidates.size());
  if (dimension < 1 || stacked.size() % dimension != 0) {
    throw Error("snap_to_candidates: vector length is not a multiple of d");
  }
  const int budget = static_cast<int>(stacked.size()) / dimension;
  if (budget > m) throw Error("snap_to_candidates: more slots than candidates");
  std::vector<char> taken(m + 1, 0);
  std::vector<int> out;
  out.reserve(budget);
  for (int s = 0; s < budget; ++s) {
    int best = -1;
    double best_dist = 0.0;
    for (const BeaconCandidate& c : candidates) {
      if (taken[c.id]) continue;
      double dist = 0.0;
      for (int k = 0; k < dimension; ++k) {
        const double diff = stacked[s * dimension + k] - c.position[k];
        dist += diff * diff;
      }
      if (best < 0 || dist < best_dist || (dist == best_dist && c.id < best)) {
        best = c.id;
        best_dist = dist;
      }
    }
    taken[best] = 1;
    out.push_back(best);
  }
  return out;
}

SelectionResult cmaes_select(const Scenario& scenario, const InfoState& state,
                             int budget, const EsConfig& config,
                             std::vector<EsGeneration>* trace,
                             Execution execution) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  const int m = scenario.num_candidates();
  const int dim = scenario.dimension;
  if (budget < 1 || budget > m) {
    throw Error("budget: must satisfy 1 <= K <= m");
  }
  if (state.num_beacons() != m || !state.selected().empty()) {
    throw Error("cmaes_select: state must match the scenario with no selection");
  }
  const std::span<const BeaconCandidate> candidates(scenario.candidates);
  const int n = dim * budget;
  const Strategy strategy(n, config.population_size);

  double initial_step = config.initial_step;
  if (initial_step <= 0.0) {
    Vec lo = candidates[0].position, hi = candidates[0].position;
    for (const auto& c : candidates) {
      lo = lo.cwiseMin(c.position);
      hi = hi.cwiseMax(c.position);
    }
    const double diagonal = (hi - lo).norm();
    initial_step = diagonal > 0.0 ? 0.3 * diagonal : 1.0;
  }

  SelectionResult result;
  result.algorithm = Algorithm::kCmaes;
  result.budget = budget;
  result.instance = state.fingerprint();

  Rng root(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  int restarts = 0;
  Rng init_rng = root.split("mean").split(std::uint64_t{0});
  Rng sample_rng = root.split("samples");

  std::vector<int> best_ids;
  double best_value = -std::numeric_limits<double>::infinity();
  auto evaluate = [&](const VectorXd& x) {
    const auto ids = snap_to_candidates(
        std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
        candidates, dim);
    return std::make_pair(normalized_value(state, ids), ids);
  };
  auto consider = [&](double value, const std::vector<int>& ids) {
    if (value > best_value) {
      best_value = value;
      best_ids = ids;
    }
  };

  Distribution dist;
  auto reset = [&](Rng& rng) {
    dist.mean = random_subset_mean(candidates, budget, dim, rng);
    dist.sigma = initial_step;
    dist.cov = MatrixXd::Identity(n, n);
    dist.path_sigma = VectorXd::Zero(n);
    dist.path_c = VectorXd::Zero(n);
    dist.generation = 0;
  };
  reset(init_rng);
  {
    const auto [value, ids] = evaluate(dist.mean);
    ++result.evaluations;
    consider(value, ids);
  }

  std::vector<double> best_history;
  int stop_reason = kMaxEvaluations;
  int total_generations = 0;
  std::vector<VectorXd> ys(strategy.lambda);
  std::vector<VectorXd> xs(strategy.lambda);
  std::vector<double> values(strategy.lambda);
  std::vector<std::vector<int>> snapped(strategy.lambda);

  while (true) {
    if (!dist.decompose()) {
      if (restarts >= config.max_restarts) {
        stop_reason = kRestartLimit;
        break;
      }
      ++restarts;
      Rng restart_rng = root.split("mean").split(static_cast<std::uint64_t>(restarts));
      reset(restart_rng);
      continue;
    }
    if (result.evaluations + strategy.lambda > config.max_evaluations) {
      stop_reason = kMaxEvaluations;
      break;
    }

    for (int k = 0; k < strategy.lambda; ++k) {
      VectorXd z(n);
      for (int c = 0; c < n; ++c) z[c] = normal(sample_rng);
      ys[k] = dist.basis * dist.scales.cwiseProduct(z);
      xs[k] = dist.mean + dist.sigma * ys[k];
    }
    auto eval_one = [&](int k) {
      auto [value, ids] = evaluate(xs[k]);
      values[k] = value;
      snapped[k] = std::move(ids);
    };
    if (execution == Execution::kSerial) {
      for (int k = 0; k < strategy.lambda; ++k) eval_one(k);
    } else {
#pragma omp parallel for schedule(static)
      for (int k = 0; k < strategy.lambda; ++k) eval_one(k);
    }
    result.evaluations += strategy.lambda;

    std::vector<int> order(strategy.lambda);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] > values[b]; });
    for (int k : order) consider(values[k], snapped[k]);

    VectorXd y_w = VectorXd::Zero(n);
    for (int i = 0; i < strategy.mu; ++i) y_w += strategy.weights[i] * ys[order[i]];
    dist.mean += dist.sigma * y_w;

    const VectorXd rotated = dist.basis.transpose() * y_w;
    const VectorXd c_inv_half_y = dist.basis * rotated.cwiseQuotient(dist.scales);
    dist.path_sigma =
        (1.0 - strategy.c_sigma) * dist.path_sigma +
        std::sqrt(strategy.c_sigma * (2.0 - strategy.c_sigma) * strategy.mu_eff) *
            c_inv_half_y;
    const double ps_norm = dist.path_sigma.norm();
    const double decay =
        std::sqrt(1.0 - std::pow(1.0 - strategy.c_sigma, 2.0 * (dist.generation + 1)));
    const bool h_sigma =
        ps_norm / decay < (1.4 + 2.0 / (n + 1.0)) * strategy.chi_n;
    dist.path_c = (1.0 - strategy.c_c) * dist.path_c +
                  (h_sigma ? std::sqrt(strategy.c_c * (2.0 - strategy.c_c) *
                                       strategy.mu_eff)
                           : 0.0) *
                      y_w;
    const double delta_h =
        h_sigma ? 0.0 : strategy.c_c * (2.0 - strategy.c_c);
    MatrixXd rank_mu = MatrixXd::Zero(n, n);
    for (int i = 0; i < strategy.mu; ++i) {
      const VectorXd& y = ys[order[i]];
      rank_mu += strategy.weights[i] * (y * y.transpose());
    }
    dist.cov = (1.0 - strategy.c_1 - strategy.c_mu) * dist.cov +
               strategy.c_1 * (dist.path_c * dist.path_c.transpose() +
                               delta_h * dist.cov) +
               strategy.c_mu * rank_mu;
    dist.sigma *= std::exp((strategy.c_sigma / strategy.d_sigma) *
                           (ps_norm / strategy.chi_n - 1.0));
    ++dist.generation;
    ++total_generations;

    best_history.push_back(best_value);
    if (trace != nullptr) {
      trace->push_back({total_generations, result.evaluations,
                        values[order[0]], best_value, dist.sigma});
    }
    const int w = config.stagnation_window;
    if (static_cast<int>(best_history.size()) > w &&
        best_history.back() - best_history[best_history.size() - 1 - w] <
            config.stagnation_tolerance) {
      stop_reason = kStagnation;
      break;
    }
  }

  result.selected = best_ids;
  InfoState work = state;
  for (int id : best_ids) {
    work.apply(id);
    result.objective_trace.push_back(work.normalized_objective());
  }
  result.metadata["generations"] = total_generations;
  result.metadata["restarts"] = restarts;
  result.metadata["stop_reason"] = stop_reason;
  result.metadata["population_size"] = strategy.lambda;
  result.metadata["initial_step"] = initial_step;
  result.metadata["max_evaluations"] = static_cast<double>(config.max_evaluations);
  result.metadata["stagnation_window"] = config.stagnation_window;
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string es_trace_csv(std::span<const EsGeneration> trace) {
  std::ostringstream out;
  out << "generation,evaluations,generation_best,best_so_far,step_size\n";
  for (const auto& g : trace) {
    out << g.generation << ',' << g.evaluations << ','
        << format_double(g.generation_best) << ',' << format_double(g.best_so_far)
        << ',' << format_double(g.step_size) << '\n';
  }
  return out.str();
}

}  // namespace beacon
