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

#ifndef BEACON_SCENARIO_IO_HPP_
#define BEACON_SCENARIO_IO_HPP_

#include <filesystem>
#include <string>

#include "json.hpp"

#include "beacon/scenario.hpp"

namespace beacon {

// Scenario files are UTF-8 JSON:
//   dimension, budget, cutoff (null = no cutoff),
//   noise {mode: "constant" | "per-edge-table", constant_variance,
//          table: [{i, j, variance}]},
//   positions [{mean: [..], covariance: scalar | d x d rows}],
//   candidates [{id, position: [..]}]
// Position indices i are 0-based array offsets; beacon ids j are 1-based.
//
// Parsing failures throw ConfigError whose message starts with the field path.
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

// CSV with header `i,j,range`, one row per graph edge.
void write_measurements_csv(const MeasurementSet& measurements,
                            const std::filesystem::path& path);
std::string measurements_csv(const MeasurementSet& measurements);

// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace beacon

#endif  // BEACON_SCENARIO_IO_HPP_
