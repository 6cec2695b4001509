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

#ifndef BEACON_EXPORT_HPP_
#define BEACON_EXPORT_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "beacon/harness.hpp"

namespace beacon {

// Per-trial records. Failed records carry nan in f_norm, rmse_m and runtime_s.
inline constexpr std::string_view kRecordsHeader =
    "setting,trial,algorithm,k,cutoff,prior_sigma,f_norm,rmse_m,runtime_s,converged_all";

std::string records_csv(std::span<const TrialRecord> records);
std::vector<TrialRecord> parse_records_csv(std::string_view text);
nlohmann::json records_json(std::span<const TrialRecord> records);

// Columns: setting,algorithm,trials,failed,rmse_mean,rmse_std,runtime_mean,
// runtime_std,f_norm_mean
std::string summary_csv(std::span<const SummaryRow> rows);
nlohmann::json summary_json(const ExperimentConfig& config,
                            const ExperimentResult& result);

// Columns: instance,k,greedy,brute_force,ratio,holds,optimal
std::string certify_csv(std::span<const CertifyRow> rows);
nlohmann::json certify_json(const CertifyConfig& config,
                            std::span<const CertifyRow> rows);

// I/O errors name the path.
void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

}  // namespace beacon

#endif  // BEACON_EXPORT_HPP_
