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

#include "beacon/localization.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "beacon/scenario_io.hpp"

namespace beacon {
namespace {

// Prior information matrix, or empty for the MLE problem.
Mat prior_information(const PositionSpec* prior) {
  if (prior == nullptr) return Mat();
  const Mat l = cholesky_factor(prior->prior_covariance, "prior covariance");
  const Mat l_inv =
      l.triangularView<Eigen::Lower>().solve(Mat::Identity(l.rows(), l.cols()));
  return l_inv.transpose() * l_inv;
}

double objective_value(const Vec& x, const PositionSpec* prior,
                       const Mat& information, std::span<const RangeTerm> terms) {
  double value = 0.0;
  if (prior != nullptr) {
    const Vec e = x - prior->prior_mean;
    value += e.dot(information * e);
  }
  for (const RangeTerm& t : terms) {
    const double r = (x - t.beacon).norm() - t.range;
    value += r * r / t.variance;
  }
  return value;
}

ObjectiveDerivatives derivatives(const Vec& x, const PositionSpec* prior,
                                 const Mat& information,
                                 std::span<const RangeTerm> terms) {
  const int d = static_cast<int>(x.size());
  ObjectiveDerivatives out;
  out.value = 0.0;
  out.gradient = Vec::Zero(d);
  out.hessian = Mat::Zero(d, d);
  if (prior != nullptr) {
    const Vec e = x - prior->prior_mean;
    out.value += e.dot(information * e);
    out.gradient += 2.0 * information * e;
    out.hessian += 2.0 * information;
  }
  const Mat eye = Mat::Identity(d, d);
  for (const RangeTerm& t : terms) {
    const Vec diff = x - t.beacon;
    const double dist = diff.norm();
    const double residual = dist - t.range;
    const double w = 1.0 / t.variance;
    const Vec u = diff / dist;
    const Mat uu = u * u.transpose();
    out.value += w * residual * residual;
    out.gradient += 2.0 * w * residual * u;
    out.hessian += 2.0 * w * (uu + (residual / dist) * (eye - uu));
  }
  return out;
}

bool finite(const ObjectiveDerivatives& d) {
  return std::isfinite(d.value) && d.gradient.allFinite() && d.hessian.allFinite();
}

bool underdetermined(const Vec& x, std::span<const RangeTerm> terms) {
  const int d = static_cast<int>(x.size());
  if (static_cast<int>(terms.size()) < d) return true;
  Mat gram = Mat::Zero(d, d);
  for (const RangeTerm& t : terms) {
    const Vec diff = x - t.beacon;
    const double dist = diff.norm();
    if (dist > 0.0) gram += (diff / dist) * (diff / dist).transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  return eig.eigenvalues().minCoeff() < 1e-12 * std::max(1.0, gram.trace());
}

}  // namespace

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged: return "converged";
    case SolveStatus::kMaxIterations: return "max_iterations";
    case SolveStatus::kUnderdetermined: return "underdetermined";
  }
  return "unknown";
}

double map_objective(const Vec& x, const PositionSpec& prior,
                     std::span<const RangeTerm> terms) {
  return objective_value(x, &prior, prior_information(&prior), terms);
}

double mle_objective(const Vec& x, std::span<const RangeTerm> terms) {
  return objective_value(x, nullptr, Mat(), terms);
}

ObjectiveDerivatives map_derivatives(const Vec& x, const PositionSpec& prior,
                                     std::span<const RangeTerm> terms) {
  return derivatives(x, &prior, prior_information(&prior), terms);
}

ObjectiveDerivatives mle_derivatives(const Vec& x,
                                     std::span<const RangeTerm> terms) {
  return derivatives(x, nullptr, Mat(), terms);
}

PositionSolve solve_position(const Vec& init, const PositionSpec* prior,
                             std::span<const RangeTerm> terms,
                             const SolveOptions& options) {
  const int d = static_cast<int>(init.size());
  PositionSolve out;
  out.estimate = init;
  if (prior == nullptr && underdetermined(init, terms)) {
    out.status = SolveStatus::kUnderdetermined;
    out.gradient_norm = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  if (prior != nullptr && terms.empty()) {
    // The objective is the prior quadratic alone; its minimizer is the mean.
    out.estimate = prior->prior_mean;
    out.gradient_norm = 0.0;
    return out;
  }

  const Mat information = prior_information(prior);
  const Mat eye = Mat::Identity(d, d);
  Vec x = init;
  ObjectiveDerivatives current = derivatives(x, prior, information, terms);
  double lambda = 1e-3;
  out.status = SolveStatus::kMaxIterations;

  for (int it = 1; it <= options.max_iterations; ++it) {
    out.iterations = it;
    if (!finite(current)) {
      Vec nudge = Vec::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
      x += 1e-6 * nudge;
      current = derivatives(x, prior, information, terms);
      continue;
    }
    const double gnorm = current.gradient.norm();
    if (gnorm <= options.gradient_tolerance) {
      out.status = SolveStatus::kConverged;
      break;
    }

    Vec step;
    if (options.damping == Damping::kNone) {
      step = current.hessian.ldlt().solve(-current.gradient);
      const Vec candidate = x + step;
      const auto next = derivatives(candidate, prior, information, terms);
      if (next.value <= current.value || !std::isfinite(current.value)) {
        x = candidate;
        current = next;
      }
    } else {
      bool accepted = false;
      while (lambda < 1e16) {
        Eigen::LLT<Mat> llt(current.hessian + lambda * eye);
        if (llt.info() != Eigen::Success) {
          lambda *= 10.0;
          continue;
        }
        step = llt.solve(-current.gradient);
        const Vec candidate = x + step;
        const double value = objective_value(candidate, prior, information, terms);
        if (std::isfinite(value) && value <= current.value) {
          x = candidate;
          current = derivatives(x, prior, information, terms);
          lambda = std::max(lambda / 3.0, 1e-12);
          accepted = true;
          break;
        }
        lambda *= 10.0;
      }
      if (!accepted) {
        out.status = SolveStatus::kConverged;
        break;
      }
    }
    if (step.norm() <= options.step_tolerance) {
      out.status = SolveStatus::kConverged;
      break;
    }
  }
  out.estimate = x;
  out.gradient_norm = finite(current) ? current.gradient.norm()
                                      : std::numeric_limits<double>::quiet_NaN();
  if (out.status == SolveStatus::kMaxIterations &&
      out.gradient_norm <= options.gradient_tolerance) {
    out.status = SolveStatus::kConverged;
  }
  return out;
}

bool LocalizationResult::all_converged() const {
  for (bool c : converged) {
    if (!c) return false;
  }
  return true;
}

std::vector<RangeTerm> range_terms(const Scenario& scenario,
                                   const MeasurementGraph& graph,
                                   const MeasurementSet& measurements,
                                   int position) {
  std::vector<RangeTerm> terms;
  for (int id : graph.neighbourhood.at(position)) {
    terms.push_back({scenario.candidate(id).position,
                     measurements.range(position, id),
                     scenario.noise.variance(position, id)});
  }
  return terms;
}

namespace {

LocalizationResult solve_all(const Scenario& scenario,
                             const MeasurementGraph& graph,
                             const MeasurementSet& measurements,
                             std::span<const Vec> init,
                             const SolveOptions& options, bool with_prior,
                             Execution execution) {
  const int n = scenario.num_positions();
  if (static_cast<int>(init.size()) != n || graph.num_positions != n) {
    throw Error("localization: init and graph must cover all " +
                std::to_string(n) + " positions");
  }
  std::vector<PositionSolve> solves(n);
  auto solve_one = [&](int i) {
    const auto terms = range_terms(scenario, graph, measurements, i);
    solves[i] = solve_position(init[i], with_prior ? &scenario.positions[i] : nullptr,
                               terms, options);
  };
  if (execution == Execution::kSerial) {
    for (int i = 0; i < n; ++i) solve_one(i);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) solve_one(i);
  }
  LocalizationResult out;
  for (const auto& s : solves) {
    out.estimates.push_back(s.estimate);
    out.converged.push_back(s.status == SolveStatus::kConverged);
    out.iterations.push_back(s.iterations);
    out.final_gradient_norms.push_back(s.gradient_norm);
    out.status.push_back(s.status);
  }
  return out;
}

}  // namespace

LocalizationResult map_solve(const Scenario& scenario,
                             const MeasurementGraph& graph,
                             const MeasurementSet& measurements,
                             std::span<const Vec> init,
                             const SolveOptions& options, Execution execution) {
  return solve_all(scenario, graph, measurements, init, options, true, execution);
}

LocalizationResult mle_solve(const Scenario& scenario,
                             const MeasurementGraph& graph,
                             const MeasurementSet& measurements,
                             std::span<const Vec> init,
                             const SolveOptions& options, Execution execution) {
  return solve_all(scenario, graph, measurements, init, options, false, execution);
}

double rmse(std::span<const Vec> estimates, std::span<const Vec> truth) {
  if (estimates.size() != truth.size() || estimates.empty()) {
    throw Error("rmse: need equal, non-zero lengths (got " +
                std::to_string(estimates.size()) + " and " +
                std::to_string(truth.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    sum += (estimates[i] - truth[i]).squaredNorm();
  }
  return std::sqrt(sum / static_cast<double>(estimates.size()));
}

nlohmann::json to_json(const LocalizationResult& r) {
  nlohmann::json doc;
  nlohmann::json estimates = nlohmann::json::array();
  for (const Vec& e : r.estimates) {
    estimates.push_back(std::vector<double>(e.data(), e.data() + e.size()));
  }
  doc["estimates"] = estimates;
  doc["converged"] = r.converged;
  doc["iterations"] = r.iterations;
  nlohmann::json norms = nlohmann::json::array();
  for (double g : r.final_gradient_norms) {
    norms.push_back(std::isfinite(g) ? nlohmann::json(g) : nlohmann::json(nullptr));
  }
  doc["final_gradient_norms"] = norms;
  nlohmann::json status = nlohmann::json::array();
  for (SolveStatus s : r.status) status.push_back(to_string(s));
  doc["status"] = status;
  return doc;
}

std::string diagnostics_csv(const LocalizationResult& r) {
  std::ostringstream out;
  const int d = r.estimates.empty() ? 0 : static_cast<int>(r.estimates[0].size());
  static const char* kAxes[] = {"x", "y", "z"};
  out << "i,converged,iterations,gradient_norm,status";
  for (int k = 0; k < d; ++k) out << ',' << kAxes[k];
  out << '\n';
  for (std::size_t i = 0; i < r.estimates.size(); ++i) {
    out << i << ',' << (r.converged[i] ? 1 : 0) << ',' << r.iterations[i] << ','
        << format_double(r.final_gradient_norms[i]) << ',' << to_string(r.status[i]);
    for (int k = 0; k < d; ++k) out << ',' << format_double(r.estimates[i][k]);
    out << '\n';
  }
  return out.str();
}

}  // namespace beacon
