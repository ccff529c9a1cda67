// Copyright 2026 The corrsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "corrsep/dataset.hpp"
#include "corrsep/simulate.hpp"

namespace corrsep {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int status = -1;
  std::string output;
};

CliRun corrsep_cli(const std::string& args, const std::string& env = {}) {
  const std::string command = env + " '" CORRSEP_CLI_PATH "' " + args + " 2>&1";
  CliRun run;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return run;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) run.output.append(buffer, n);
  const int raw = pclose(pipe);
  run.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return run;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("corrsep_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::mt19937_64 rng(5);
    const Dataset all = gaussian_cluster(260, GaussianClusterSpec{}, rng);
    std::vector<std::size_t> ref_rows(200);
    std::vector<std::size_t> test_rows(60);
    for (std::size_t i = 0; i < 200; ++i) ref_rows[i] = i;
    for (std::size_t i = 0; i < 60; ++i) test_rows[i] = 200 + i;
    write_csv(path("ref.csv"), all.select_rows(ref_rows));
    write_csv(path("clean.csv"), all.select_rows(test_rows));
    CorruptionSpec spec;
    spec.fraction_lo = spec.fraction_hi = 0.5;
    spec.seed = 8;
    write_csv(path("test.csv"), corrupt(all.select_rows(test_rows), spec).data);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string data_args() const {
    return "--reference " + path("ref.csv") + " --test " + path("test.csv") + " --no-scale";
  }

  fs::path dir_;
};

TEST_F(CliTest, DetectWritesOutputs) {
  const CliRun run = corrsep_cli("detect " + data_args() + " --tau 0.05 --out " + path("d"));
  ASSERT_EQ(run.status, 0) << run.output;
  EXPECT_TRUE(fs::exists(path("d/detect.jsonl")));
  EXPECT_TRUE(fs::exists(path("d/mask.csv")));
  EXPECT_TRUE(fs::exists(path("d/summary.json")));
  std::ifstream lines(path("d/detect.jsonl"));
  std::string line;
  std::size_t row = 0;
  while (std::getline(lines, line)) {
    const auto doc = nlohmann::json::parse(line);
    EXPECT_EQ(doc["row"], row++);
    EXPECT_TRUE(doc.contains("corrupted_attributes"));
  }
  EXPECT_EQ(row, 60u);
}

TEST_F(CliTest, InvalidTauExitsWithUsageCodeAndNamesKey) {
  const CliRun run = corrsep_cli("detect " + data_args() + " --tau 1.5 --out " + path("d"));
  EXPECT_EQ(run.status, 1);
  EXPECT_NE(run.output.find("tau"), std::string::npos);
}

TEST_F(CliTest, MissingReferencePrintsUsage) {
  const CliRun run = corrsep_cli("detect --test " + path("test.csv") + " --out " + path("d"));
  EXPECT_EQ(run.status, 1);
  EXPECT_NE(run.output.find("--reference"), std::string::npos);
  EXPECT_NE(run.output.find("Usage"), std::string::npos);
}

TEST_F(CliTest, MalformedCsvIsDataError) {
  std::ofstream(path("bad.csv")) << "0.1,0.2\n0.3\n";
  const CliRun run = corrsep_cli("detect --reference " + path("ref.csv") + " --test " +
                              path("bad.csv") + " --out " + path("d"));
  EXPECT_EQ(run.status, 2);
  EXPECT_NE(run.output.find("ragged"), std::string::npos);
}

TEST_F(CliTest, ImputeOnCleanDataReproducesInput) {
  const CliRun run = corrsep_cli("impute --reference " + path("ref.csv") + " --test " +
                              path("ref.csv") + " -k 1 --tau 0.05 --out " + path("i"));
  ASSERT_EQ(run.status, 0) << run.output;
  EXPECT_EQ(slurp(path("i/imputed.csv")), slurp(path("ref.csv")));
}

TEST_F(CliTest, ImputeChangesOnlyMaskedCells) {
  ASSERT_EQ(corrsep_cli("detect " + data_args() + " --tau 0.05 --out " + path("o")).status, 0);
  ASSERT_EQ(corrsep_cli("impute " + data_args() + " --tau 0.05 --out " + path("o")).status, 0);
  CsvOptions with_header;
  with_header.has_header = true;
  const Dataset mask = load_csv(path("o/mask.csv"), with_header);
  const Dataset before = load_csv(path("test.csv"));
  const Dataset after = load_csv(path("o/imputed.csv"));
  std::size_t changed = 0;
  for (std::size_t i = 0; i < before.rows(); ++i) {
    for (std::size_t a = 0; a < before.dims(); ++a) {
      if (mask.at(i, a) == 0.0) EXPECT_EQ(after.at(i, a), before.at(i, a));
      changed += after.at(i, a) != before.at(i, a) ? 1 : 0;
    }
  }
  EXPECT_GT(changed, 0u);
}

TEST_F(CliTest, NearestNeighborMatchesMapWithSingleCandidate) {
  ASSERT_EQ(corrsep_cli("impute " + data_args() + " --method nn --out " + path("nn")).status, 0);
  ASSERT_EQ(corrsep_cli("impute " + data_args() + " --method map --neighborhood 1 --out " +
                        path("map")).status,
            0);
  EXPECT_EQ(slurp(path("nn/imputed.csv")), slurp(path("map/imputed.csv")));
  EXPECT_EQ(slurp(path("nn/audit.json")), slurp(path("map/audit.json")));
}

TEST_F(CliTest, FamodelFullDependencyEchoesTau) {
  const CliRun run = corrsep_cli("famodel --theta-grid 1 --tau-grid 0.01,0.05,0.128 --depths 2,6 --out " +
                              path("f"));
  ASSERT_EQ(run.status, 0) << run.output;
  CsvOptions with_header;
  with_header.has_header = true;
  std::ifstream in(path("f/famodel.csv"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "tau,theta,L,C_tau_analytic,C_tau_bruteforce");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::stringstream cells(line);
    std::string tau, theta, depth, analytic;
    std::getline(cells, tau, ',');
    std::getline(cells, theta, ',');
    std::getline(cells, depth, ',');
    std::getline(cells, analytic, ',');
    EXPECT_EQ(std::stod(analytic), std::stod(tau)) << line;
  }
  EXPECT_EQ(rows, 6u);
}

TEST_F(CliTest, GaussianDefaultGridHasFiveRows) {
  const CliRun run = corrsep_cli("gaussian --trials 1 --per-class 60 --out " + path("g"));
  ASSERT_EQ(run.status, 0) << run.output;
  std::ifstream in(path("g/gaussian.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("K,MSE,accuracy", 0), 0u);
  std::vector<std::string> ks;
  while (std::getline(in, line)) ks.push_back(line.substr(0, line.find(',')));
  EXPECT_EQ(ks, (std::vector<std::string>{"1", "4", "8", "12", "16"}));
}

TEST_F(CliTest, EvaluateSummaryEchoesSeedAndConfig) {
  const CliRun run = corrsep_cli(
      "evaluate --synthetic --reference-rows 120 --test-rows 40 --seed 9 --out " + path("e"));
  ASSERT_EQ(run.status, 0) << run.output;
  const auto summary = nlohmann::json::parse(slurp(path("e/summary.json")));
  EXPECT_EQ(summary["seed"], 9);
  EXPECT_EQ(summary["command"], "evaluate");
  for (const char* key : {"tau", "alpha", "k", "depth", "tau-grid", "reference-rows", "pi"}) {
    EXPECT_TRUE(summary["config"].contains(key)) << key;
  }
  EXPECT_EQ(summary["config"]["reference-rows"], 120);
  EXPECT_TRUE(summary.contains("timestamp"));
  EXPECT_TRUE(fs::exists(path("e/roc.csv")));
}

TEST_F(CliTest, FlagsOverrideConfigFile) {
  std::ofstream(path("cfg.json")) << R"({"tau": 0.2, "alpha": 0.5, "no_scale": true})";
  const CliRun run = corrsep_cli("detect --config " + path("cfg.json") + " --tau 0.1 --reference " +
                              path("ref.csv") + " --test " + path("test.csv") + " --out " +
                              path("c"));
  ASSERT_EQ(run.status, 0) << run.output;
  const auto config = nlohmann::json::parse(slurp(path("c/summary.json")))["config"];
  EXPECT_EQ(config["tau"], 0.1);
  EXPECT_EQ(config["alpha"], 0.5);
  EXPECT_EQ(config["no-scale"], true);
}

TEST_F(CliTest, UnknownConfigKeyIsRejected) {
  std::ofstream(path("cfg.json")) << R"({"tua": 0.2})";
  const CliRun run = corrsep_cli("detect --config " + path("cfg.json") + " " + data_args() +
                              " --out " + path("c"));
  EXPECT_EQ(run.status, 1);
  EXPECT_NE(run.output.find("tua"), std::string::npos);
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
  auto twice = [&](const std::string& args, std::vector<std::string> files) {
    ASSERT_EQ(corrsep_cli(args).status, 0);
    std::vector<std::string> first;
    for (const auto& f : files) first.push_back(slurp(f));
    ASSERT_EQ(corrsep_cli(args, "CORRSEP_THREADS=1").status, 0);
    for (std::size_t i = 0; i < files.size(); ++i) {
      EXPECT_FALSE(first[i].empty()) << files[i];
      EXPECT_EQ(first[i], slurp(files[i])) << files[i];
    }
  };
  twice("simulate --rows 80 --dims 16 --pi 0.5 --seed 4 --no-timestamp --out " + path("s"),
        {path("s/clean.csv"), path("s/corrupted.csv"), path("s/masks.csv"), path("s/summary.json")});
  twice("evaluate --synthetic --reference-rows 100 --test-rows 40 --no-timestamp --out " + path("e"),
        {path("e/roc.csv"), path("e/summary.json")});
  EXPECT_FALSE(nlohmann::json::parse(slurp(path("e/summary.json"))).contains("timestamp"));
}

TEST_F(CliTest, HelpAndUnknownSubcommand) {
  EXPECT_EQ(corrsep_cli("--help").status, 0);
  EXPECT_EQ(corrsep_cli("frobnicate").status, 1);
}

}  // namespace
}  // namespace corrsep
