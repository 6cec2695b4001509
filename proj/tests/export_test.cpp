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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <tuple>

#include <gtest/gtest.h>

namespace beacon {
namespace {

std::vector<TrialRecord> sample_records() {
  std::vector<TrialRecord> out;
  const char* settings[] = {"baseline", "K=10", "sigma=5"};
  int t = 0;
  for (const char* s : settings) {
    for (auto alg : {Algorithm::kGreedy, Algorithm::kRandom, Algorithm::kCmaes}) {
      TrialRecord r;
      r.setting = s;
      r.trial = t % 3;
      r.algorithm = alg;
      r.k = 5 + t;
      r.cutoff = t == 4 ? std::numeric_limits<double>::infinity() : 250.0 + t / 7.0;
      r.prior_sigma = 8.0;
      r.f_norm = 1.0 / (t + 3.0);
      r.rmse_m = 3.0 + std::sqrt(t + 0.1);
      r.runtime_s = 1e-4 * t;
      r.converged_all = t % 2 == 0;
      out.push_back(r);
      ++t;
    }
  }
  out[5].ok = false;
  out[5].f_norm = std::numeric_limits<double>::quiet_NaN();
  out[5].rmse_m = std::numeric_limits<double>::quiet_NaN();
  out[5].runtime_s = std::numeric_limits<double>::quiet_NaN();
  return out;
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

TEST(RecordsCsvTest, HeaderIsExact) {
  const auto text = records_csv(std::vector<TrialRecord>{});
  EXPECT_EQ(text,
            "setting,trial,algorithm,k,cutoff,prior_sigma,f_norm,rmse_m,runtime_s,"
            "converged_all\n");
}

TEST(RecordsCsvTest, RoundTripPreservesEveryColumn) {
  const auto records = sample_records();
  const auto back = parse_records_csv(records_csv(records));
  ASSERT_EQ(back.size(), records.size());
  auto key = [](const TrialRecord& r) {
    return std::make_tuple(r.setting, r.trial, static_cast<int>(r.algorithm));
  };
  auto a = records;
  auto b = back;
  auto by_key = [&](const TrialRecord& x, const TrialRecord& y) { return key(x) < key(y); };
  std::sort(a.begin(), a.end(), by_key);
  std::sort(b.begin(), b.end(), by_key);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(key(a[i]), key(b[i]));
    EXPECT_EQ(a[i].k, b[i].k);
    EXPECT_TRUE(same(a[i].cutoff, b[i].cutoff));
    EXPECT_TRUE(same(a[i].f_norm, b[i].f_norm));
    EXPECT_TRUE(same(a[i].rmse_m, b[i].rmse_m));
    EXPECT_TRUE(same(a[i].runtime_s, b[i].runtime_s));
    EXPECT_EQ(a[i].converged_all, b[i].converged_all);
    EXPECT_EQ(a[i].ok, b[i].ok);
  }
  EXPECT_EQ(records_csv(back), records_csv(records));
}

TEST(RecordsCsvTest, RejectsMalformedInput) {
  EXPECT_THROW(parse_records_csv("a,b\n"), Error);
  const std::string header(kRecordsHeader);
  EXPECT_THROW(parse_records_csv(header + "\nx,1,greedy\n"), Error);
  EXPECT_THROW(parse_records_csv(header + "\nx,1,greedy,5,1,1,zz,1,0,true\n"), Error);
  EXPECT_THROW(parse_records_csv(header + "\nx,1,bogus,5,1,1,1,1,0,true\n"), ConfigError);
}

TEST(RecordsJsonTest, FailedRowsCarryNullsAndError) {
  auto records = sample_records();
  records[5].error = "boom";
  records[0].selected = {3, 1, 2};
  const auto doc = records_json(records);
  ASSERT_EQ(doc.size(), records.size());
  EXPECT_TRUE(doc[5]["rmse_m"].is_null());
  EXPECT_EQ(doc[5]["error"], "boom");
  EXPECT_FALSE(doc[0].contains("error"));
  EXPECT_EQ(doc[0]["selected"], nlohmann::json({3, 1, 2}));
  EXPECT_TRUE(doc[4]["cutoff"].is_null());
}

TEST(SummaryTest, CsvAndJsonShape) {
  ExperimentConfig config;
  config.trials = 7;
  ExperimentResult result;
  result.failures = 1;
  result.summary = {{"baseline", Algorithm::kGreedy, 7, 0, 3.5, 0.25, 0.0, 0.0, 0.75},
                    {"baseline", Algorithm::kBruteForce, 0, 7,
                     std::numeric_limits<double>::quiet_NaN(),
                     std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0,
                     std::numeric_limits<double>::quiet_NaN()}};
  const auto csv = summary_csv(result.summary);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "setting,algorithm,trials,failed,rmse_mean,rmse_std,runtime_mean,runtime_std,"
            "f_norm_mean");
  const auto doc = summary_json(config, result);
  EXPECT_EQ(doc["trials_requested"], 7);
  EXPECT_EQ(doc["failures"], 1);
  ASSERT_EQ(doc["rows"].size(), 2u);
  EXPECT_EQ(doc["rows"][0]["rmse_mean"], 3.5);
  EXPECT_TRUE(doc["rows"][1]["rmse_mean"].is_null());
  EXPECT_EQ(doc["rows"][1]["algorithm"], "brute_force");
}

TEST(CertifyExportTest, CountsPairsAndInstances) {
  CertifyConfig config;
  config.instances = 2;
  config.max_budget = 2;
  std::vector<CertifyRow> rows = {{0, 1, 1.0, 1.0, 1.0, true, true},
                                  {0, 2, 1.5, 2.0, 0.75, true, false},
                                  {1, 1, 0.5, 0.5, 1.0, true, true},
                                  {1, 2, 0.9, 0.9, 1.0, true, true}};
  const auto doc = certify_json(config, rows);
  EXPECT_EQ(doc["pairs"], 4);
  EXPECT_EQ(doc["bound_holds"], 4);
  EXPECT_EQ(doc["greedy_optimal_pairs"], 3);
  EXPECT_EQ(doc["greedy_optimal_instances"], 1);
  EXPECT_EQ(doc["min_ratio"], 0.75);
  const auto csv = certify_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "instance,k,greedy,brute_force,ratio,holds,optimal");
  EXPECT_NE(csv.find("0,2,1.5,2,0.75,true,false"), std::string::npos) << csv;
}

TEST(TextFileTest, RoundTripAndErrorsNameThePath) {
  const auto dir = std::filesystem::temp_directory_path() / "beacon_export_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "x.txt";
  write_text(path, "hello\nworld\n");
  EXPECT_EQ(read_text(path), "hello\nworld\n");
  const auto missing = dir / "no" / "such" / "file.txt";
  try {
    write_text(missing, "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(missing.string()), std::string::npos);
  }
  try {
    read_text(missing);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(missing.string()), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace beacon
