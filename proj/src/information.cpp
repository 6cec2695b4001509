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

#include "beacon/information.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include <Eigen/Cholesky>

namespace beacon {
namespace {

class Fnv {
 public:
  void add(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < size; ++k) {
      h_ ^= bytes[k];
      h_ *= 0x100000001b3ULL;
    }
  }
  void add(double v) { add(&v, sizeof v); }
  void add(int v) { add(&v, sizeof v); }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace

std::string_view to_string(FimMode mode) {
  return mode == FimMode::kExpected ? "expected" : "one-sample";
}

FimMode parse_fim_mode(std::string_view text) {
  if (text == "expected") return FimMode::kExpected;
  if (text == "one-sample") return FimMode::kOneSample;
  throw ConfigError("fim-mode: expected \"expected\" or \"one-sample\", got \"" +
                    std::string(text) + "\"");
}

Mat EdgeContribution::matrix() const {
  const Mat outer = direction * direction.transpose();
  return weight * outer;
}

EdgeContribution edge_contribution(int position, int beacon_id,
                                   const Vec& point, const Vec& beacon,
                                   double variance, FimMode mode,
                                   double measured_range) {
  const Vec diff = point - beacon;
  const double dist = diff.norm();
  if (!(dist > kCoincidentTolerance)) {
    throw Error("degenerate edge (" + std::to_string(position) + ", " +
                std::to_string(beacon_id) + "): position coincides with beacon");
  }
  EdgeContribution c;
  c.position = position;
  c.beacon = beacon_id;
  c.direction = diff / dist;
  if (mode == FimMode::kExpected) {
    c.weight = 1.0 / variance;
  } else {
    if (!std::isfinite(measured_range)) {
      throw Error("one-sample information for edge (" +
                  std::to_string(position) + ", " + std::to_string(beacon_id) +
                  ") needs a measured range");
    }
    const double residual = dist - measured_range;
    c.weight = residual * residual / (variance * variance);
  }
  return c;
}

double log_det_spd(const Mat& m) {
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error("log_det_spd: matrix is not positive definite");
  }
  const Mat& l = llt.matrixLLT();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < l.rows(); ++k) sum += std::log(l(k, k));
  return 2.0 * sum;
}

InfoState InfoState::create(const Scenario& scenario,
                            const MeasurementGraph& graph,
                            std::span<const Vec> points,
                            const MeasurementSet* measurements, FimMode mode) {
  const int n = scenario.num_positions();
  const int m = scenario.num_candidates();
  if (graph.num_positions != n || graph.num_beacons != m) {
    throw Error("init_state: graph does not match scenario");
  }
  if (static_cast<int>(points.size()) != n) {
    throw Error("init_state: expected " + std::to_string(n) +
                " evaluation points");
  }
  if (mode == FimMode::kOneSample && measurements == nullptr) {
    throw Error("init_state: one-sample mode needs measurements");
  }

  InfoState state;
  state.dimension_ = scenario.dimension;
  state.mode_ = mode;
  Fnv hash;
  hash.add(n);
  hash.add(m);
  hash.add(static_cast<int>(mode));

  auto priors = std::make_shared<std::vector<Mat>>();
  priors->reserve(n);
  state.blocks_.reserve(n);
  state.prior_log_det_.reserve(n);
  for (int i = 0; i < n; ++i) {
    const Mat& cov = scenario.positions[i].prior_covariance;
    const std::string what = "positions[" + std::to_string(i) + "].covariance";
    const Mat l = cholesky_factor(cov, what.c_str());
    const Mat l_inv =
        l.triangularView<Eigen::Lower>().solve(Mat::Identity(l.rows(), l.cols()));
    Mat info = l_inv.transpose() * l_inv;
    info = 0.5 * (info + info.transpose()).eval();
    InfoBlock block;
    block.matrix = info;
    block.inverse = cov;
    block.log_det = log_det_spd(info);
    state.prior_log_det_.push_back(block.log_det);
    state.empty_objective_ += block.log_det;
    for (Eigen::Index k = 0; k < info.size(); ++k) hash.add(info.data()[k]);
    priors->push_back(info);
    state.blocks_.push_back(std::move(block));
  }

  auto by_beacon = std::make_shared<std::vector<std::vector<EdgeContribution>>>(m);
  for (const Edge& e : graph.edges) {
    const double measured = measurements != nullptr && mode == FimMode::kOneSample
                                ? measurements->range(e.position, e.beacon)
                                : std::numeric_limits<double>::quiet_NaN();
    (*by_beacon)[e.beacon - 1].push_back(
        edge_contribution(e.position, e.beacon, points[e.position],
                          scenario.candidate(e.beacon).position, e.variance,
                          mode, measured));
  }
  for (const auto& list : *by_beacon) {
    for (const auto& c : list) {
      hash.add(c.position);
      hash.add(c.beacon);
      hash.add(c.weight);
      for (Eigen::Index k = 0; k < c.direction.size(); ++k) {
        hash.add(c.direction[k]);
      }
    }
  }
  state.contributions_ = std::move(by_beacon);
  state.prior_information_ = std::move(priors);
  state.selected_mask_.assign(m + 1, 0);
  state.fingerprint_ = hash.value();
  return state;
}

double InfoState::objective() const {
  double sum = 0.0;
  for (const auto& b : blocks_) sum += b.log_det;
  return sum;
}

double InfoState::normalized_objective() const {
  double sum = 0.0;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    sum += blocks_[i].log_det - prior_log_det_[i];
  }
  return sum;
}

void InfoState::check_id(int beacon_id) const {
  if (beacon_id < 1 || beacon_id > num_beacons()) {
    throw Error("unknown beacon id " + std::to_string(beacon_id));
  }
}

bool InfoState::is_selected(int beacon_id) const {
  check_id(beacon_id);
  return selected_mask_[beacon_id] != 0;
}

std::span<const EdgeContribution> InfoState::contributions(int beacon_id) const {
  check_id(beacon_id);
  return (*contributions_)[beacon_id - 1];
}

const Mat& InfoState::prior_information(int position) const {
  return (*prior_information_)[position];
}

double InfoState::marginal_gain(int beacon_id) const {
  if (is_selected(beacon_id)) {
    throw Error("beacon " + std::to_string(beacon_id) + " is already selected");
  }
  double gain = 0.0;
  for (const EdgeContribution& c : (*contributions_)[beacon_id - 1]) {
    const Mat& inv = blocks_[c.position].inverse;
    const double q = c.weight * c.direction.dot(inv * c.direction);
    gain += std::log1p(q);
  }
  if (gain < 0.0 && gain >= -kGainClamp) gain = 0.0;
  return gain;
}

void InfoState::refactor(InfoBlock& block) const {
  Eigen::LLT<Mat> llt(block.matrix);
  if (llt.info() != Eigen::Success) {
    throw Error("information block lost positive definiteness");
  }
  block.inverse = llt.solve(Mat::Identity(block.matrix.rows(), block.matrix.cols()));
  block.inverse = 0.5 * (block.inverse + block.inverse.transpose()).eval();
  const Mat& l = llt.matrixLLT();
  double sum = 0.0;
  for (Eigen::Index k = 0; k < l.rows(); ++k) sum += std::log(l(k, k));
  block.log_det = 2.0 * sum;
  block.updates_since_refactor = 0;
}

void InfoState::apply(int beacon_id) {
  if (is_selected(beacon_id)) {
    throw Error("beacon " + std::to_string(beacon_id) + " is already selected");
  }
  for (const EdgeContribution& c : (*contributions_)[beacon_id - 1]) {
    if (c.weight == 0.0) continue;
    InfoBlock& block = blocks_[c.position];
    const Vec au = block.inverse * c.direction;
    const double q = c.weight * c.direction.dot(au);
    const Mat outer = c.direction * c.direction.transpose();
    const Mat inv_outer = au * au.transpose();
    block.matrix += c.weight * outer;
    block.inverse -= (c.weight / (1.0 + q)) * inv_outer;
    block.log_det += std::log1p(q);
    if (++block.updates_since_refactor >= kRefactorInterval) refactor(block);
  }
  selected_.push_back(beacon_id);
  selected_mask_[beacon_id] = 1;
}

InfoState apply_selection(const InfoState& state, int beacon_id) {
  InfoState next = state;
  next.apply(beacon_id);
  return next;
}

double normalized_value(const InfoState& state, std::span<const int> beacon_ids) {
  InfoState work = state;
  for (int id : beacon_ids) work.apply(id);
  return work.normalized_objective();
}

}  // namespace beacon
