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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace beacon {
namespace {

using nlohmann::json;

json minimal_doc() {
  return json::parse(R"({
    "dimension": 2, "budget": 1, "cutoff": null,
    "noise": {"mode": "constant", "constant_variance": 25},
    "positions": [{"mean": [0, 0], "covariance": 64}],
    "candidates": [{"id": 2, "position": [5, 5]}, {"id": 1, "position": [1, 2]}]
  })");
}

std::string error_of(const json& doc) {
  try {
    scenario_from_json(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ScenarioIoTest, ParsesMinimalDocument) {
  const auto s = scenario_from_json(minimal_doc());
  EXPECT_EQ(s.dimension, 2);
  EXPECT_TRUE(std::isinf(s.cutoff));
  EXPECT_EQ(s.candidates[0].id, 1);
  EXPECT_EQ(s.candidates[1].position, (Vec(2) << 5, 5).finished());
  EXPECT_EQ(s.positions[0].prior_covariance, Mat::Identity(2, 2) * 64.0);
}

TEST(ScenarioIoTest, RoundTripPreservesScenario) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = testing::random_instance(seed, 4, 5, 2 + seed % 2, 50.0, 100.0, seed % 2).scenario;
    s.budget = 3;
    EXPECT_EQ(scenario_from_json(scenario_to_json(s)), s);
    EXPECT_EQ(scenario_from_json(json::parse(scenario_to_json(s).dump())), s);
  }
}

TEST(ScenarioIoTest, IsotropicCovarianceIsWrittenAsScalar) {
  const auto s = scenario_from_json(minimal_doc());
  EXPECT_TRUE(scenario_to_json(s)["positions"][0]["covariance"].is_number());
  EXPECT_TRUE(scenario_to_json(s)["cutoff"].is_null());
}

TEST(ScenarioIoTest, ErrorsCarryFieldPaths) {
  auto doc = minimal_doc();
  doc.erase("budget");
  EXPECT_EQ(error_of(doc).rfind("budget", 0), 0u);
  doc = minimal_doc();
  doc["positions"][0]["covariance"] = json::parse("[[1, 2], [2, 1]]");
  EXPECT_EQ(error_of(doc).rfind("positions[0].covariance", 0), 0u) << error_of(doc);
  doc = minimal_doc();
  doc["positions"][0]["covariance"] = json::parse("[[1, 0]]");
  EXPECT_EQ(error_of(doc).rfind("positions[0].covariance", 0), 0u);
  doc = minimal_doc();
  doc["candidates"][1]["position"] = "x";
  EXPECT_EQ(error_of(doc).rfind("candidates[1].position", 0), 0u);
  doc = minimal_doc();
  doc["noise"]["mode"] = "loud";
  EXPECT_EQ(error_of(doc).rfind("noise.mode", 0), 0u);
  doc = minimal_doc();
  doc["noise"]["table"] = json::parse(R"([{"i": 0, "j": 1}])");
  EXPECT_EQ(error_of(doc).rfind("noise.table[0].variance", 0), 0u);
  doc = minimal_doc();
  doc["budget"] = 3;
  EXPECT_EQ(error_of(doc).rfind("budget", 0), 0u);
  doc = minimal_doc();
  doc["candidates"][0]["id"] = 3;
  EXPECT_EQ(error_of(doc).rfind("candidates[1].id", 0), 0u) << error_of(doc);
}

TEST(ScenarioIoTest, FileRoundTripAndMissingFile) {
  const auto dir = std::filesystem::temp_directory_path() / "beacon_io_test";
  std::filesystem::create_directories(dir);
  const auto s = scenario_from_json(minimal_doc());
  save_scenario(s, dir / "s.json");
  EXPECT_EQ(load_scenario(dir / "s.json"), s);
  EXPECT_THROW(load_scenario(dir / "missing.json"), ConfigError);
  std::ofstream(dir / "bad.json") << "{ not json";
  EXPECT_THROW(load_scenario(dir / "bad.json"), ConfigError);
}

TEST(MeasurementCsvTest, HeaderAndRows) {
  MeasurementSet ms;
  ms.ranges = {{0, 1, 12.5}, {3, 7, 0.1}};
  EXPECT_EQ(measurements_csv(ms), "i,j,range\n0,1,12.5\n3,7,0.1\n");
}

TEST(FormatDoubleTest, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e-300), "1e-300");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(std::numeric_limits<double>::quiet_NaN()), "nan");
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double v = u(gen);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

}  // namespace
}  // namespace beacon
