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

#ifndef BEACON_KERNELS_HPP_
#define BEACON_KERNELS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "beacon/information.hpp"
#include "beacon/types.hpp"

// Data-parallel inner loops of the selectors. Every kernel has an OpenMP
// path and a serial reference path that produce bitwise-identical results.
namespace beacon::kernels {

// gains[id - 1] = marginal gain of every unselected beacon; NaN for beacons
// already in the state's selection.
void compute_gains(const InfoState& state, std::span<double> gains,
                   Execution execution);

struct SubsetOptimum {
  std::vector<int> ids;  // ascending
  double value = 0.0;    // normalized objective
  std::uint64_t subsets_evaluated = 0;
};

// Exhaustive maximization of the normalized objective over all k-subsets of
// the candidates, starting from `state`'s (empty) selection. Ties resolve to
// the lexicographically smallest subset.
SubsetOptimum best_subset(const InfoState& state, int k, Execution execution);

// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);

}  // namespace beacon::kernels

#endif  // BEACON_KERNELS_HPP_
