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

#include "cli_support.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "corrsep/error.hpp"
#include "corrsep/partition_tree.hpp"
#include "corrsep/parallel.hpp"

namespace corrsep::cli {
namespace {

const CLI::Option* find_long_option(const CLI::App& sub, const std::string& name) {
  for (const CLI::Option* opt : sub.get_options()) {
    const auto& names = opt->get_lnames();
    if (std::find(names.begin(), names.end(), name) != names.end()) return opt;
  }
  return nullptr;
}

std::string scalar_text(const nlohmann::json& value, const std::string& key) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_integer() || value.is_number_unsigned()) return value.dump();
  if (value.is_number_float()) return format_real(value.get<double>());
  throw ParameterError(key, "config value must be a scalar or an array of scalars");
}

nlohmann::json typed_value(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  const char* end = text.data() + text.size();
  long long integer = 0;
  if (auto [ptr, ec] = std::from_chars(text.data(), end, integer);
      ec == std::errc() && ptr == end && !text.empty()) {
    return integer;
  }
  double number = 0.0;
  if (auto [ptr, ec] = std::from_chars(text.data(), end, number);
      ec == std::errc() && ptr == end && !text.empty()) {
    return number;
  }
  return text;
}

}  // namespace

void add_run_options(CLI::App& sub, RunOptions& run) {
  sub.add_option("--config", run.config, "JSON file of flat option keys; flags override it");
  sub.add_option("--out", run.out_dir, "Output directory");
  sub.add_flag("--no-timestamp", run.no_timestamp, "Omit the timestamp from summary.json");
  sub.add_option("--threads", run.threads, "Worker threads (default: CORRSEP_THREADS or all)");
  sub.add_option("--seed", run.seed, "Master random seed");
}

void add_data_options(CLI::App& sub, DataOptions& data) {
  sub.add_option("--reference", data.reference, "Reference (training) CSV");
  sub.add_option("--test", data.test, "Test CSV");
  sub.add_flag("--header", data.header, "CSV files start with a header row");
  sub.add_flag("--labels", data.labels, "CSV files carry a class label column");
  sub.add_option("--label-column", data.label_column, "Label column index (default: last)");
  sub.add_flag("--no-scale", data.no_scale, "Skip min-max scaling fitted on the reference");
}

void add_separation_options(CLI::App& sub, SeparationOptions& sep) {
  sub.add_option("--tau", sep.tau, "Per-node false alarm rate in (0,1)");
  sub.add_option("--alpha", sep.alpha, "Ranked-distance fraction in (0,1]");
  sub.add_option("-k,--k", sep.k, "Neighbors of the kNN score");
  sub.add_option("--k-by-depth", sep.k_by_depth, "Per-depth K overrides, root first")
      ->delimiter(',');
  sub.add_option("-L,--depth", sep.depth,
                 "Tree depth (default: deepest L <= min(6, floor(log2 d)) with "
                 "floor(leaf size * alpha) >= 1)");
}

void apply_json_config(CLI::App& sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw DataError("config file '" + path + "' must hold a JSON object");

  for (const auto& [raw_key, value] : doc.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config") throw ParameterError(raw_key, "config files cannot nest");
    CLI::Option* opt = const_cast<CLI::Option*>(find_long_option(sub, key));
    if (opt == nullptr) throw ParameterError(raw_key, "unknown option for '" + sub.get_name() + "'");
    if (opt->count() > 0) continue;
    try {
      if (value.is_array()) {
        for (const auto& item : value) opt->add_result(scalar_text(item, raw_key));
      } else if (opt->get_expected_max() == 0) {
        if (!value.is_boolean()) throw ParameterError(raw_key, "flag value must be true or false");
        if (!value.get<bool>()) continue;
        opt->add_result("true");
      } else {
        opt->add_result(scalar_text(value, raw_key));
      }
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ParameterError(raw_key, e.what());
    }
  }
}

nlohmann::json effective_config(const CLI::App& sub) {
  nlohmann::json config = nlohmann::json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty() || names.front() == "help" || names.front() == "config") continue;
    const std::string& name = names.front();
    if (opt->get_expected_max() == 0) {
      config[name] = opt->count() > 0;
      continue;
    }
    std::vector<std::string> results = opt->results();
    const std::string& fallback = opt->get_default_str();
    if (results.empty() && fallback.size() > 2 && fallback.front() == '[') {
      results = CLI::detail::split(fallback.substr(1, fallback.size() - 2), ',');
    } else if (results.empty() && !fallback.empty() && fallback != "{}" && fallback != "[]") {
      results = {fallback};
    }
    if (results.empty()) {
      config[name] = opt->get_expected_max() > 1 ? nlohmann::json::array() : nlohmann::json();
    } else if (opt->get_expected_max() > 1) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& r : results) arr.push_back(typed_value(r));
      config[name] = std::move(arr);
    } else {
      config[name] = typed_value(results.back());
    }
  }
  return config;
}

void require_option(const CLI::App& sub, const std::string& name, bool present) {
  if (!present) throw UsageError("--" + name + " is required for '" + sub.get_name() + "'");
}

CsvOptions csv_options(const DataOptions& data) {
  CsvOptions options;
  options.has_header = data.header;
  options.has_labels = data.labels || data.label_column.has_value();
  options.label_column = data.label_column;
  return options;
}

std::size_t thread_count(const RunOptions& run) {
  if (run.threads) {
    if (*run.threads == 0) throw ParameterError("threads", "must be >= 1");
    return *run.threads;
  }
  return default_thread_count();
}

std::size_t auto_depth(std::size_t dims, double alpha) {
  std::size_t depth = 1;
  while (depth < 6 && (dims >> (depth + 1)) >= 1) ++depth;
  for (; depth > 1; --depth) {
    const PartitionTree tree(dims, depth);
    std::size_t smallest = dims;
    for (std::size_t node = tree.node_count() / 2; node < tree.node_count(); ++node) {
      smallest = std::min(smallest, tree.range(node).size());
    }
    if (std::floor(static_cast<double>(smallest) * alpha) >= 1.0) break;
  }
  return depth;
}

std::size_t resolve_depth(const SeparationOptions& sep, std::size_t dims) {
  return sep.depth.value_or(auto_depth(dims, sep.alpha));
}

AnomalyParams anomaly_params(const SeparationOptions& sep) {
  AnomalyParams params;
  params.tau = sep.tau;
  params.alpha = sep.alpha;
  params.k_neighbors = sep.k;
  params.k_by_depth = sep.k_by_depth;
  return params;
}

void validate_ranges(const SeparationOptions& sep) {
  if (!(sep.tau > 0.0 && sep.tau < 1.0)) {
    throw ParameterError("tau", "must lie in (0,1), got " + format_real(sep.tau));
  }
  if (!(sep.alpha > 0.0 && sep.alpha <= 1.0)) {
    throw ParameterError("alpha", "must lie in (0,1], got " + format_real(sep.alpha));
  }
  if (sep.k < 1) throw ParameterError("k", "must be >= 1");
  for (int k : sep.k_by_depth) {
    if (k < 1) throw ParameterError("k-by-depth", "entries must be >= 1");
  }
  if (sep.depth && *sep.depth < 1) throw ParameterError("depth", "must be >= 1");
}

std::filesystem::path output_dir(const RunOptions& run) {
  const std::filesystem::path dir(run.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory '" + run.out_dir + "': " + ec.message());
  return dir;
}

void write_summary(const RunOptions& run, const CLI::App& sub, nlohmann::json metrics) {
  nlohmann::json summary{{"command", sub.get_name()},
                         {"metrics", std::move(metrics)},
                         {"config", effective_config(sub)},
                         {"seed", run.seed}};
  if (!run.no_timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    summary["timestamp"] = buf;
  }
  std::ofstream out(output_dir(run) / "summary.json");
  if (!out) throw DataError("cannot write summary.json");
  out << summary.dump(2) << '\n';
}

std::string csv_cell(const std::optional<double>& value) {
  return value ? format_real(*value) : std::string();
}

}  // namespace corrsep::cli
