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

#include "beacon/kernels.hpp"

#include <cmath>
#include <limits>

#include <omp.h>

namespace beacon::kernels {

void compute_gains(const InfoState& state, std::span<double> gains,
                   Execution execution) {
  const int m = state.num_beacons();
  if (static_cast<int>(gains.size()) != m) {
    throw Error("compute_gains: output has wrong length");
  }
  auto gain_of = [&](int id) {
    return state.is_selected(id) ? std::numeric_limits<double>::quiet_NaN()
                                 : state.marginal_gain(id);
  };
  if (execution == Execution::kSerial) {
    for (int id = 1; id <= m; ++id) gains[id - 1] = gain_of(id);
    return;
  }
#pragma omp parallel for schedule(static)
  for (int id = 1; id <= m; ++id) gains[id - 1] = gain_of(id);
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(result);
}

namespace {

// Depth-first enumeration of k-subsets in lexicographic order. Blocks are
// updated in place and restored on the way back up; the running value is
// the sum of per-block log-det changes along the path, so it depends only on
// the path and not on how the search is partitioned across threads.
class SubsetSearch {
 public:
  SubsetSearch(const InfoState& state, int k) : state_(state), k_(k) {
    for (const auto& b : state.blocks()) {
      matrix_.push_back(b.matrix);
      log_det_.push_back(b.log_det);
    }
    path_.reserve(k);
  }

  // Explores every subset whose smallest element is `first`.
  void run_from(int first) {
    const double delta = push(first);
    descend(first + 1, delta);
    pop(first);
  }

  const SubsetOptimum& best() const { return best_; }
  bool has_best() const { return has_best_; }

 private:
  struct Saved {
    int position;
    Mat matrix;
    double log_det;
  };

  double push(int id) {
    double delta = 0.0;
    path_.push_back(id);
    for (const EdgeContribution& c : state_.contributions(id)) {
      if (c.weight == 0.0) continue;
      saved_.push_back({c.position, matrix_[c.position], log_det_[c.position]});
      const Mat outer = c.direction * c.direction.transpose();
      matrix_[c.position] += c.weight * outer;
      const double updated = log_det_spd(matrix_[c.position]);
      delta += updated - log_det_[c.position];
      log_det_[c.position] = updated;
    }
    marks_.push_back(saved_.size());
    return delta;
  }

  void pop(int id) {
    (void)id;
    marks_.pop_back();
    const std::size_t keep = marks_.empty() ? 0 : marks_.back();
    while (saved_.size() > keep) {
      const Saved& s = saved_.back();
      matrix_[s.position] = s.matrix;
      log_det_[s.position] = s.log_det;
      saved_.pop_back();
    }
    path_.pop_back();
  }

  void descend(int next, double value) {
    const int depth = static_cast<int>(path_.size());
    if (depth == k_) {
      ++best_.subsets_evaluated;
      if (!has_best_ || value > best_.value) {
        has_best_ = true;
        best_.value = value;
        best_.ids = path_;
      }
      return;
    }
    const int m = state_.num_beacons();
    for (int id = next; id <= m - (k_ - depth) + 1; ++id) {
      const double delta = push(id);
      descend(id + 1, value + delta);
      pop(id);
    }
  }

  const InfoState& state_;
  int k_;
  std::vector<Mat> matrix_;
  std::vector<double> log_det_;
  std::vector<Saved> saved_;
  std::vector<std::size_t> marks_;
  std::vector<int> path_;
  SubsetOptimum best_;
  bool has_best_ = false;
};

}  // namespace

SubsetOptimum best_subset(const InfoState& state, int k, Execution execution) {
  const int m = state.num_beacons();
  if (k < 1 || k > m) throw Error("best_subset: need 1 <= k <= m");
  if (!state.selected().empty()) {
    throw Error("best_subset: state must have an empty selection");
  }
  const int last_first = m - k + 1;
  std::vector<SubsetOptimum> per_first(last_first);
  std::vector<char> found(last_first, 0);

  auto search_from = [&](int first) {
    SubsetSearch search(state, k);
    search.run_from(first);
    per_first[first - 1] = search.best();
    found[first - 1] = search.has_best();
  };
  if (execution == Execution::kSerial) {
    for (int first = 1; first <= last_first; ++first) search_from(first);
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (int first = 1; first <= last_first; ++first) search_from(first);
  }

  SubsetOptimum result;
  bool have = false;
  for (int f = 0; f < last_first; ++f) {
    result.subsets_evaluated += per_first[f].subsets_evaluated;
    if (found[f] && (!have || per_first[f].value > result.value)) {
      have = true;
      result.value = per_first[f].value;
      result.ids = per_first[f].ids;
    }
  }
  return result;
}

}  // namespace beacon::kernels
