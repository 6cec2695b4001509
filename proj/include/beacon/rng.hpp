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

#ifndef BEACON_RNG_HPP_
#define BEACON_RNG_HPP_

#include <cstdint>
#include <limits>
#include <string_view>

namespace beacon {

// Counter-based generator: the k-th output is a SplitMix64 finalization of
// key + k * gamma, so a stream is fully described by its key. Child streams
// are derived by hashing a tag into the key, which keeps every
// (trial, purpose) stream independent of how many other streams exist.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  Rng split(std::uint64_t tag) const { return Rng(derive(key_, tag)); }
  Rng split(std::string_view purpose) const {
    return Rng(derive(key_, hash_tag(purpose)));
  }

  std::uint64_t key() const { return key_; }

  static std::uint64_t derive(std::uint64_t key, std::uint64_t tag);
  static std::uint64_t derive(std::uint64_t key, std::string_view purpose) {
    return derive(key, hash_tag(purpose));
  }
  static std::uint64_t hash_tag(std::string_view purpose);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace beacon

#endif  // BEACON_RNG_HPP_
