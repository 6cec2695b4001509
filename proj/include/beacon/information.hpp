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

#ifndef BEACON_INFORMATION_HPP_
#define BEACON_INFORMATION_HPP_

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "beacon/scenario.hpp"
#include "beacon/types.hpp"

namespace beacon {

// How the per-edge Fisher information weight is formed.
//   kExpected:  1 / sigma^2, the exact FIM of a Gaussian range.
//   kOneSample: r^2 / sigma^4 with r the range residual at the evaluation
//               point, i.e. the score outer product at the observed data.
enum class FimMode { kExpected, kOneSample };

std::string_view to_string(FimMode mode);
FimMode parse_fim_mode(std::string_view text);

// Rank-one information term weight * u u^T contributed by one edge.
struct EdgeContribution {
  int position = 0;
  int beacon = 0;
  Vec direction;  // unit vector from the beacon towards the position
  double weight = 0.0;

  Mat matrix() const;
};

// Throws Error if the two points coincide, or if a one-sample weight is
// requested without a finite measured range.
EdgeContribution edge_contribution(
    int position, int beacon_id, const Vec& point, const Vec& beacon,
    double variance, FimMode mode,
    double measured_range = std::numeric_limits<double>::quiet_NaN());

// Log determinant of an SPD matrix through its Cholesky factor.
double log_det_spd(const Mat& m);

// One diagonal d x d block of the posterior information matrix with its
// inverse kept current through Sherman-Morrison updates.
struct InfoBlock {
  Mat matrix;
  Mat inverse;
  double log_det = 0.0;
  int updates_since_refactor = 0;
};

// Block-diagonal information state for a set of selected beacons. A value
// type: copies share the immutable per-edge contributions.
class InfoState {
 public:
  // Number of Sherman-Morrison updates a block absorbs before it is
  // refactored from its matrix.
  static constexpr int kRefactorInterval = 64;
  // Negative gains down to this magnitude are rounding noise and become 0.
  static constexpr double kGainClamp = 1e-9;

  // `points` are where the edge directions and one-sample residuals are
  // evaluated (normally the ground truth). `measurements` may be null in
  // expected mode.
  static InfoState create(const Scenario& scenario,
                          const MeasurementGraph& graph,
                          std::span<const Vec> points,
                          const MeasurementSet* measurements, FimMode mode);

  double objective() const;
  // objective() minus the objective of the empty selection; 0 when empty.
  double normalized_objective() const;
  double empty_objective() const { return empty_objective_; }

  // f(S u {j}) - f(S) through the matrix determinant lemma.
  double marginal_gain(int beacon_id) const;
  void apply(int beacon_id);

  int num_positions() const { return static_cast<int>(blocks_.size()); }
  int num_beacons() const { return static_cast<int>(contributions_->size()); }
  int dimension() const { return dimension_; }
  FimMode mode() const { return mode_; }
  const std::vector<InfoBlock>& blocks() const { return blocks_; }
  const std::vector<int>& selected() const { return selected_; }
  bool is_selected(int beacon_id) const;
  std::span<const EdgeContribution> contributions(int beacon_id) const;
  double prior_log_det(int position) const { return prior_log_det_[position]; }
  const Mat& prior_information(int position) const;
  // Identifies the instance (priors and contributions), not the selection.
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  InfoState() = default;
  void check_id(int beacon_id) const;
  void refactor(InfoBlock& block) const;

  std::shared_ptr<const std::vector<std::vector<EdgeContribution>>>
      contributions_;
  std::shared_ptr<const std::vector<Mat>> prior_information_;
  std::vector<InfoBlock> blocks_;
  std::vector<double> prior_log_det_;
  std::vector<int> selected_;
  std::vector<char> selected_mask_;
  double empty_objective_ = 0.0;
  int dimension_ = 0;
  FimMode mode_ = FimMode::kExpected;
  std::uint64_t fingerprint_ = 0;
};

inline InfoState init_state(const Scenario& scenario,
                            const MeasurementGraph& graph,
                            std::span<const Vec> points,
                            const MeasurementSet* measurements, FimMode mode) {
  return InfoState::create(scenario, graph, points, measurements, mode);
}

inline double objective(const InfoState& state) { return state.objective(); }
inline double normalized_objective(const InfoState& state) {
  return state.normalized_objective();
}
inline double marginal_gain(const InfoState& state, int beacon_id) {
  return state.marginal_gain(beacon_id);
}
InfoState apply_selection(const InfoState& state, int beacon_id);

// Normalized objective of `state`'s selection extended by `beacon_ids`.
double normalized_value(const InfoState& state, std::span<const int> beacon_ids);

}  // namespace beacon

#endif  // BEACON_INFORMATION_HPP_
