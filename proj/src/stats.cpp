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

#include "beacon/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "beacon/types.hpp"

namespace beacon::stats {

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mu = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

WilcoxonResult wilcoxon_less(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("wilcoxon: samples must be paired");
  std::vector<double> diffs;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    if (d != 0.0) diffs.push_back(d);
  }
  WilcoxonResult out;
  out.n = static_cast<int>(diffs.size());
  if (out.n == 0) return out;

  std::vector<int> order(diffs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(diffs[a]) < std::abs(diffs[b]);
  });
  std::vector<double> ranks(diffs.size());
  bool ties = false;
  double tie_term = 0.0;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start + 1;
    while (end < order.size() &&
           std::abs(diffs[order[end]]) == std::abs(diffs[order[start]])) {
      ++end;
    }
    const double t = static_cast<double>(end - start);
    if (t > 1) {
      ties = true;
      tie_term += t * t * t - t;
    }
    const double avg = 0.5 * static_cast<double>(start + 1 + end);
    for (std::size_t k = start; k < end; ++k) ranks[order[k]] = avg;
    start = end;
  }
  for (std::size_t k = 0; k < diffs.size(); ++k) {
    if (diffs[k] > 0) out.statistic += ranks[k];
  }

  const int n = out.n;
  if (n <= 50 && !ties) {
    // Null distribution of the positive-rank sum by counting subsets.
    const int max_sum = n * (n + 1) / 2;
    std::vector<double> counts(max_sum + 1, 0.0);
    counts[0] = 1.0;
    for (int r = 1; r <= n; ++r) {
      for (int s = max_sum; s >= r; --s) counts[s] += counts[s - r];
    }
    const int observed = static_cast<int>(std::lround(out.statistic));
    double below = 0.0;
    for (int s = 0; s <= observed; ++s) below += counts[s];
    out.p_value = below / std::ldexp(1.0, n);
    out.exact = true;
  } else {
    const double nn = n;
    const double mu = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    const double z = (out.statistic - mu) / std::sqrt(var);
    out.p_value = 0.5 * std::erfc(-z / std::sqrt(2.0));
  }
  return out;
}

}  // namespace beacon::stats
