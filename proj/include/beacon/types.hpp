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

#ifndef BEACON_TYPES_HPP_
#define BEACON_TYPES_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace beacon {

// Positions live in R^d with d <= 3, so the small vectors and blocks never
// touch the heap.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

// Any violated precondition or invariant on user-supplied data.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input files or configuration; the CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Selects between the OpenMP kernels and their serial reference versions.
enum class Execution { kParallel, kSerial };

}  // namespace beacon

#endif  // BEACON_TYPES_HPP_
