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

#include "beacon/export.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "beacon/scenario_io.hpp"

namespace beacon {
namespace {

double parse_double(const std::string& text, std::size_t line) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error("records csv line " + std::to_string(line) + ": bad number \"" +
              text + "\"");
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string records_csv(std::span<const TrialRecord> records) {
  std::ostringstream out;
  out << kRecordsHeader << '\n';
  for (const TrialRecord& r : records) {
    out << r.setting << ',' << r.trial << ',' << to_string(r.algorithm) << ','
        << r.k << ',' << format_double(r.cutoff) << ','
        << format_double(r.prior_sigma) << ',' << format_double(r.f_norm) << ','
        << format_double(r.rmse_m) << ',' << format_double(r.runtime_s) << ','
        << (r.converged_all ? "true" : "false") << '\n';
  }
  return out.str();
}

std::vector<TrialRecord> parse_records_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kRecordsHeader) {
    throw Error("records csv: unexpected header");
  }
  std::vector<TrialRecord> records;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != 10) {
      throw Error("records csv line " + std::to_string(number) +
                  ": expected 10 columns");
    }
    TrialRecord r;
    r.setting = cells[0];
    r.trial = static_cast<int>(parse_double(cells[1], number));
    r.algorithm = parse_algorithm(cells[2]);
    r.k = static_cast<int>(parse_double(cells[3], number));
    r.cutoff = parse_double(cells[4], number);
    r.prior_sigma = parse_double(cells[5], number);
    r.f_norm = parse_double(cells[6], number);
    r.rmse_m = parse_double(cells[7], number);
    r.runtime_s = parse_double(cells[8], number);
    r.converged_all = cells[9] == "true";
    r.ok = !std::isnan(r.rmse_m);
    records.push_back(std::move(r));
  }
  return records;
}

nlohmann::json records_json(std::span<const TrialRecord> records) {
  nlohmann::json out = nlohmann::json::array();
  for (const TrialRecord& r : records) {
    nlohmann::json row = {{"setting", r.setting},
                          {"trial", r.trial},
                          {"algorithm", to_string(r.algorithm)},
                          {"k", r.k},
                          {"prior_sigma", r.prior_sigma},
                          {"selected", r.selected},
                          {"evaluations", r.evaluations},
                          {"converged_all", r.converged_all},
                          {"ok", r.ok}};
    row["cutoff"] = std::isinf(r.cutoff) ? nlohmann::json() : nlohmann::json(r.cutoff);
    row["f_norm"] = r.ok ? nlohmann::json(r.f_norm) : nlohmann::json();
    row["rmse_m"] = r.ok ? nlohmann::json(r.rmse_m) : nlohmann::json();
    row["runtime_s"] = r.ok ? nlohmann::json(r.runtime_s) : nlohmann::json();
    if (!r.ok) row["error"] = r.error;
    out.push_back(std::move(row));
  }
  return out;
}

std::string summary_csv(std::span<const SummaryRow> rows) {
  std::ostringstream out;
  out << "setting,algorithm,trials,failed,rmse_mean,rmse_std,runtime_mean,"
         "runtime_std,f_norm_mean\n";
  for (const SummaryRow& r : rows) {
    out << r.setting << ',' << to_string(r.algorithm) << ',' << r.trials << ','
        << r.failed << ',' << format_double(r.rmse_mean) << ','
        << format_double(r.rmse_std) << ',' << format_double(r.runtime_mean)
        << ',' << format_double(r.runtime_std) << ','
        << format_double(r.f_norm_mean) << '\n';
  }
  return out.str();
}

nlohmann::json summary_json(const ExperimentConfig& config,
                            const ExperimentResult& result) {
  auto number = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const SummaryRow& r : result.summary) {
    rows.push_back({{"setting", r.setting},
                    {"algorithm", to_string(r.algorithm)},
                    {"trials", r.trials},
                    {"failed", r.failed},
                    {"rmse_mean", number(r.rmse_mean)},
                    {"rmse_std", number(r.rmse_std)},
                    {"runtime_mean", number(r.runtime_mean)},
                    {"runtime_std", number(r.runtime_std)},
                    {"f_norm_mean", number(r.f_norm_mean)}});
  }
  return {{"trials_requested", config.trials},
          {"master_seed", config.master_seed},
          {"failures", result.failures},
          {"rows", rows}};
}

std::string certify_csv(std::span<const CertifyRow> rows) {
  std::ostringstream out;
  out << "instance,k,greedy,brute_force,ratio,holds,optimal\n";
  for (const CertifyRow& r : rows) {
    out << r.instance << ',' << r.k << ',' << format_double(r.greedy) << ','
        << format_double(r.brute_force) << ',' << format_double(r.ratio) << ','
        << (r.holds ? "true" : "false") << ',' << (r.optimal ? "true" : "false")
        << '\n';
  }
  return out.str();
}

nlohmann::json certify_json(const CertifyConfig& config,
                            std::span<const CertifyRow> rows) {
  int holds = 0;
  int optimal = 0;
  double min_ratio = 1.0;
  std::vector<bool> instance_optimal(config.instances, true);
  for (const CertifyRow& r : rows) {
    holds += r.holds;
    optimal += r.optimal;
    min_ratio = std::min(min_ratio, r.ratio);
    if (!r.optimal) instance_optimal[r.instance] = false;
  }
  int instances_optimal = 0;
  for (bool b : instance_optimal) instances_optimal += b;
  return {{"instances", config.instances},
          {"n", config.num_positions},
          {"m", config.num_candidates},
          {"dimension", config.dimension},
          {"max_budget", config.max_budget},
          {"fim_mode", to_string(config.fim_mode)},
          {"seed", config.seed},
          {"pairs", rows.size()},
          {"bound", kGreedyBound},
          {"bound_holds", holds},
          {"greedy_optimal_pairs", optimal},
          {"greedy_optimal_instances", instances_optimal},
          {"min_ratio", min_ratio}};
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << content;
  if (!out) throw Error(path.string() + ": write failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(path.string() + ": cannot open");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace beacon
