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

#ifndef BEACON_STATS_HPP_
#define BEACON_STATS_HPP_

#include <span>

namespace beacon::stats {

double mean(std::span<const double> values);
// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_std(std::span<const double> values);

struct WilcoxonResult {
  double statistic = 0.0;  // sum of ranks of positive differences
  double p_value = 1.0;
  int n = 0;               // pairs with nonzero difference
  bool exact = false;
};

// One-sided Wilcoxon signed-rank test of H1: x tends to be smaller than y.
// Zero differences are dropped. Uses the exact null distribution when there
// are at most 50 nonzero pairs and no tied magnitudes, otherwise the normal
// approximation with tie correction.
WilcoxonResult wilcoxon_less(std::span<const double> x, std::span<const double> y);

}  // namespace beacon::stats

#endif  // BEACON_STATS_HPP_
