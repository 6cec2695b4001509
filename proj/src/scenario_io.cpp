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

#include "beacon/scenario_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace beacon {
namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ConfigError((path.empty() ? std::string(key) : path + "." + key) +
                      ": missing");
  }
  return *it;
}

std::string join(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return v.get<int>();
}

Vec as_vector(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty() || v.size() > 3) {
    throw ConfigError(path + ": expected an array of 1 to 3 numbers");
  }
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    out[k] = as_number(v[k], path + "[" + std::to_string(k) + "]");
  }
  return out;
}

Mat as_covariance(const json& v, int dim, const std::string& path) {
  if (v.is_number()) {
    const double s = v.get<double>();
    if (!(s > 0.0)) throw ConfigError(path + ": scalar variance must be positive");
    return Mat::Identity(dim, dim) * s;
  }
  if (!v.is_array() || static_cast<int>(v.size()) != dim) {
    throw ConfigError(path + ": expected a scalar or a " + std::to_string(dim) +
                      "x" + std::to_string(dim) + " matrix");
  }
  Mat out(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!v[r].is_array() || static_cast<int>(v[r].size()) != dim) {
      throw ConfigError(row_path + ": expected " + std::to_string(dim) +
                        " entries");
    }
    for (int c = 0; c < dim; ++c) {
      out(r, c) = as_number(v[r][c], row_path + "[" + std::to_string(c) + "]");
    }
  }
  return out;
}

json vector_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
  return out;
}

json covariance_json(const Mat& m) {
  const double s = m(0, 0);
  if (m == Mat::Identity(m.rows(), m.cols()) * s) return s;
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
  Scenario s;
  s.dimension = as_int(field(doc, "dimension", ""), "dimension");
  if (s.dimension != 2 && s.dimension != 3) {
    throw ConfigError("dimension: must be 2 or 3");
  }
  s.budget = as_int(field(doc, "budget", ""), "budget");
  const json& cutoff = field(doc, "cutoff", "");
  s.cutoff = cutoff.is_null() ? std::numeric_limits<double>::infinity()
                              : as_number(cutoff, "cutoff");

  const json& noise = field(doc, "noise", "");
  const std::string mode = [&] {
    const json& m = field(noise, "mode", "noise");
    if (!m.is_string()) throw ConfigError("noise.mode: expected a string");
    return m.get<std::string>();
  }();
  if (mode == "constant") {
    s.noise.mode = NoiseMode::kConstant;
  } else if (mode == "per-edge-table") {
    s.noise.mode = NoiseMode::kPerEdgeTable;
  } else {
    throw ConfigError("noise.mode: expected \"constant\" or \"per-edge-table\"");
  }
  s.noise.constant_variance =
      as_number(field(noise, "constant_variance", "noise"),
                "noise.constant_variance");
  if (auto it = noise.find("table"); it != noise.end() && !it->is_null()) {
    if (!it->is_array()) throw ConfigError("noise.table: expected an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const std::string path = "noise.table[" + std::to_string(k) + "]";
      const json& row = (*it)[k];
      const int i = as_int(field(row, "i", path), join(path, "i"));
      const int j = as_int(field(row, "j", path), join(path, "j"));
      s.noise.table[{i, j}] =
          as_number(field(row, "variance", path), join(path, "variance"));
    }
  }

  const json& positions = field(doc, "positions", "");
  if (!positions.is_array()) throw ConfigError("positions: expected an array");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const std::string path = "positions[" + std::to_string(i) + "]";
    PositionSpec p;
    p.prior_mean =
        as_vector(field(positions[i], "mean", path), join(path, "mean"));
    p.prior_covariance = as_covariance(field(positions[i], "covariance", path),
                                       s.dimension, join(path, "covariance"));
    s.positions.push_back(std::move(p));
  }

  const json& candidates = field(doc, "candidates", "");
  if (!candidates.is_array()) throw ConfigError("candidates: expected an array");
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const std::string path = "candidates[" + std::to_string(k) + "]";
    BeaconCandidate c;
    c.id = as_int(field(candidates[k], "id", path), join(path, "id"));
    c.position = as_vector(field(candidates[k], "position", path),
                           join(path, "position"));
    s.candidates.push_back(std::move(c));
  }
  std::stable_sort(
      s.candidates.begin(), s.candidates.end(),
      [](const BeaconCandidate& a, const BeaconCandidate& b) { return a.id < b.id; });

  try {
    s.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return s;
}

json scenario_to_json(const Scenario& s) {
  json doc;
  doc["dimension"] = s.dimension;
  doc["budget"] = s.budget;
  doc["cutoff"] = std::isinf(s.cutoff) ? json(nullptr) : json(s.cutoff);
  json noise;
  noise["mode"] =
      s.noise.mode == NoiseMode::kConstant ? "constant" : "per-edge-table";
  noise["constant_variance"] = s.noise.constant_variance;
  if (!s.noise.table.empty()) {
    json table = json::array();
    for (const auto& [key, variance] : s.noise.table) {
      table.push_back({{"i", key.first}, {"j", key.second}, {"variance", variance}});
    }
    noise["table"] = table;
  }
  doc["noise"] = noise;
  json positions = json::array();
  for (const auto& p : s.positions) {
    positions.push_back({{"mean", vector_json(p.prior_mean)},
                         {"covariance", covariance_json(p.prior_covariance)}});
  }
  doc["positions"] = positions;
  json candidates = json::array();
  for (const auto& c : s.candidates) {
    candidates.push_back({{"id", c.id}, {"position", vector_json(c.position)}});
  }
  doc["candidates"] = candidates;
  return doc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << scenario_to_json(scenario).dump(2) << '\n';
  if (!out) throw Error(path.string() + ": write failed");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

std::string measurements_csv(const MeasurementSet& measurements) {
  std::ostringstream out;
  out << "i,j,range\n";
  for (const auto& r : measurements.ranges) {
    out << r.position << ',' << r.beacon << ',' << format_double(r.range) << '\n';
  }
  return out.str();
}

void write_measurements_csv(const MeasurementSet& measurements,
                            const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << measurements_csv(measurements);
  if (!out) throw Error(path.string() + ": write failed");
}

}  // namespace beacon
