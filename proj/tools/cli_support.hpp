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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "corrsep/anomaly_score.hpp"
#include "corrsep/dataset.hpp"

namespace corrsep::cli {

// Missing required input; reported with the subcommand usage text.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::string config;
  std::string out_dir = ".";
  bool no_timestamp = false;
  std::optional<std::size_t> threads;
  std::uint64_t seed = 1;
};

struct DataOptions {
  std::string reference;
  std::string test;
  bool header = false;
  bool labels = false;
  std::optional<std::size_t> label_column;
  bool no_scale = false;
};

struct SeparationOptions {
  double tau = 0.016;
  double alpha = 0.75;
  int k = 8;
  std::vector<int> k_by_depth;
  std::optional<std::size_t> depth;
};

void add_run_options(CLI::App& sub, RunOptions& run);
void add_data_options(CLI::App& sub, DataOptions& data);
void add_separation_options(CLI::App& sub, SeparationOptions& sep);

// Fills every option of `sub` that was not given on the command line from a
// flat JSON object whose keys are long option names ("tau", "k-grid"; an
// underscore may replace a dash). Command-line values win. Unknown keys and
// unconvertible values throw ParameterError naming the key.
void apply_json_config(CLI::App& sub, const std::string& path);

// Every long option of `sub` with its effective value.
nlohmann::json effective_config(const CLI::App& sub);

void require_option(const CLI::App& sub, const std::string& name, bool present);

CsvOptions csv_options(const DataOptions& data);
std::size_t thread_count(const RunOptions& run);

// Largest depth <= 6 whose leaves keep at least one attribute.
std::size_t auto_depth(std::size_t dims, double alpha);
std::size_t resolve_depth(const SeparationOptions& sep, std::size_t dims);

AnomalyParams anomaly_params(const SeparationOptions& sep);
// Range checks that need no data (tau, alpha, K >= 1).
void validate_ranges(const SeparationOptions& sep);

std::filesystem::path output_dir(const RunOptions& run);
void write_summary(const RunOptions& run, const CLI::App& sub, nlohmann::json metrics);

std::string csv_cell(const std::optional<double>& value);

}  // namespace corrsep::cli
