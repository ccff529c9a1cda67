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

#include "commands.hpp"

#include <fstream>
#include <memory>
#include <string>

#include "cli_support.hpp"
#include "corrsep/classifier.hpp"
#include "corrsep/error.hpp"
#include "corrsep/evaluate.hpp"
#include "corrsep/fa_model.hpp"
#include "corrsep/impute.hpp"
#include "corrsep/json_io.hpp"
#include "corrsep/parallel.hpp"
#include "corrsep/separation.hpp"
#include "corrsep/simulate.hpp"

namespace corrsep::cli {
namespace {

struct LoadedData {
  Dataset reference_raw;
  Dataset test_raw;
  Dataset reference;
  Dataset test;
  std::optional<ScalingParams> scaling;
};

Dataset scaled_like(const Dataset& raw, const LoadedData& loaded) {
  return loaded.scaling ? apply_scaling(raw, *loaded.scaling) : raw;
}

LoadedData load_data(const Dataset& reference, const Dataset& test, bool no_scale) {
  if (reference.dims() != test.dims()) {
    throw DataError("reference has " + std::to_string(reference.dims()) +
                    " attributes but test has " + std::to_string(test.dims()));
  }
  LoadedData out{reference, test, reference, test, std::nullopt};
  if (!no_scale) {
    auto [scaled, params] = scale_unit(reference);
    out.reference = std::move(scaled);
    out.test = apply_scaling(test, params);
    out.scaling = std::move(params);
  }
  return out;
}

LoadedData load_files(const CLI::App& sub, const DataOptions& data) {
  require_option(sub, "reference", !data.reference.empty());
  require_option(sub, "test", !data.test.empty());
  const CsvOptions csv = csv_options(data);
  return load_data(load_csv(data.reference, csv), load_csv(data.test, csv), data.no_scale);
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

std::vector<std::string> attribute_names(const Dataset& data) {
  const CsvLayout& layout = data.layout();
  std::vector<std::string> names;
  if (!layout.header.empty()) {
    for (std::size_t c = 0; c < layout.header.size(); ++c) {
      if (!layout.label_column || *layout.label_column != c) names.push_back(layout.header[c]);
    }
  }
  if (names.size() != data.dims()) {
    names.clear();
    for (std::size_t a = 0; a < data.dims(); ++a) names.push_back("x" + std::to_string(a));
  }
  return names;
}

void write_masks(const std::filesystem::path& path, const Dataset& like,
                 const std::vector<CorruptionMask>& masks) {
  std::ofstream out = open_output(path);
  const auto names = attribute_names(like);
  for (std::size_t a = 0; a < names.size(); ++a) out << (a ? "," : "") << names[a];
  out << '\n';
  for (const auto& mask : masks) {
    for (std::size_t a = 0; a < mask.size(); ++a) out << (a ? "," : "") << (mask[a] ? 1 : 0);
    out << '\n';
  }
}

std::vector<CorruptionMask> read_masks(const std::string& path, std::size_t rows,
                                       std::size_t dims) {
  CsvOptions options;
  options.has_header = true;
  const Dataset raw = load_csv(path, options);
  if (raw.rows() != rows || raw.dims() != dims) {
    throw DataError("mask file '" + path + "' must be " + std::to_string(rows) + " x " +
                    std::to_string(dims));
  }
  std::vector<CorruptionMask> masks(rows, CorruptionMask(dims, false));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t a = 0; a < dims; ++a) masks[i][a] = raw.at(i, a) != 0.0;
  }
  return masks;
}

ScoreModel build_model(const Dataset& reference, const SeparationOptions& sep,
                       std::size_t threads) {
  const PartitionTree tree(reference.dims(), resolve_depth(sep, reference.dims()));
  return ScoreModel(reference, tree, anomaly_params(sep), threads);
}

struct ImputeOptions {
  std::string method = "map";
  std::optional<std::size_t> neighborhood;
  std::optional<double> gamma;
  std::optional<double> alpha_impute;
};

void add_impute_options(CLI::App& sub, ImputeOptions& imp) {
  sub.add_option("--method", imp.method, "Imputation estimator")
      ->check(CLI::IsMember({"map", "nn"}));
  sub.add_option("--neighborhood", imp.neighborhood, "Candidate count (default: K)");
  sub.add_option("--gamma", imp.gamma, "Candidate count ceil(gamma * sqrt(N)) when set");
  sub.add_option("--alpha-impute", imp.alpha_impute, "Alpha of the candidate search");
}

ImputeParams impute_params(const ImputeOptions& imp) {
  ImputeParams params;
  params.method = imp.method == "nn" ? ImputeMethod::kNearestNeighbor : ImputeMethod::kMap;
  params.neighborhood_size = imp.neighborhood;
  params.gamma = imp.gamma;
  params.alpha_impute = imp.alpha_impute;
  if (params.alpha_impute && !(*params.alpha_impute > 0.0 && *params.alpha_impute <= 1.0)) {
    throw ParameterError("alpha-impute", "must lie in (0,1]");
  }
  return params;
}

// Copies each declared range from the unscaled reference row chosen by the
// imputer so untouched cells keep their exact input values.
std::vector<double> splice_raw(const LoadedData& data, std::size_t row,
                               const ImputedInstance& imputed, const PartitionTree& tree) {
  const auto original = data.test_raw.row(row);
  std::vector<double> out(original.begin(), original.end());
  for (const auto& [node, source] : imputed.source_rows) {
    const AttributeRange r = tree.range(node);
    for (std::size_t a = r.start; a < r.end; ++a) out[a] = data.reference_raw.at(source, a);
  }
  return out;
}

Command detect_command(CLI::App& app) {
  auto* sub = app.add_subcommand("detect", "Detect and localize corrupted attributes");
  struct Options {
    RunOptions run;
    DataOptions data;
    SeparationOptions sep;
  };
  auto opts = std::make_shared<Options>();
  add_run_options(*sub, opts->run);
  add_data_options(*sub, opts->data);
  add_separation_options(*sub, opts->sep);
  return {sub, [sub, opts] {
            apply_json_config(*sub, opts->run.config);
            validate_ranges(opts->sep);
            const std::size_t threads = thread_count(opts->run);
            const LoadedData data = load_files(*sub, opts->data);
            const ScoreModel model = build_model(data.reference, opts->sep, threads);

            std::vector<SeparationResult> results(data.test.rows());
            parallel_for(
                data.test.rows(),
                [&](std::size_t i) { results[i] = tcs_separate(model, data.test.row(i)); },
                threads);

            const auto dir = output_dir(opts->run);
            std::ofstream lines = open_output(dir / "detect.jsonl");
            std::vector<CorruptionMask> masks;
            std::size_t detected = 0;
            for (std::size_t i = 0; i < results.size(); ++i) {
              nlohmann::json line = separation_to_json(results[i], model.tree());
              line["row"] = i;
              lines << line.dump() << '\n';
              masks.push_back(localization_mask(results[i], data.test.dims()));
              detected += results[i].detected ? 1 : 0;
            }
            write_masks(dir / "mask.csv", data.test_raw, masks);
            const double n = static_cast<double>(results.size());
            write_summary(opts->run, *sub,
                          {{"instances", results.size()},
                           {"detected", detected},
                           {"detection_rate", n > 0 ? static_cast<double>(detected) / n : 0.0},
                           {"depth", model.tree().depth()}});
          }};
}

Command impute_command(CLI::App& app) {
  auto* sub = app.add_subcommand("impute", "Detect corruptions and impute the declared ranges");
  struct Options {
    RunOptions run;
    DataOptions data;
    SeparationOptions sep;
    ImputeOptions imp;
  };
  auto opts = std::make_shared<Options>();
  add_run_options(*sub, opts->run);
  add_data_options(*sub, opts->data);
  add_separation_options(*sub, opts->sep);
  add_impute_options(*sub, opts->imp);
  return {sub, [sub, opts] {
            apply_json_config(*sub, opts->run.config);
            validate_ranges(opts->sep);
            const ImputeParams params = impute_params(opts->imp);
            const std::size_t threads = thread_count(opts->run);
            const LoadedData data = load_files(*sub, opts->data);
            const ScoreModel model = build_model(data.reference, opts->sep, threads);

            std::vector<ImputedInstance> imputed(data.test.rows());
            parallel_for(
                data.test.rows(),
                [&](std::size_t i) {
                  QueryEvaluator query(model, data.test.row(i));
                  imputed[i] = impute(query, tcs_separate(query, opts->sep.tau), params);
                },
                threads);

            std::vector<double> values;
            values.reserve(data.test_raw.values().size());
            nlohmann::json audit = nlohmann::json::array();
            std::size_t rows_imputed = 0;
            std::size_t cells_imputed = 0;
            for (std::size_t i = 0; i < imputed.size(); ++i) {
              const auto row = splice_raw(data, i, imputed[i], model.tree());
              values.insert(values.end(), row.begin(), row.end());
              if (imputed[i].source_rows.empty()) continue;
              ++rows_imputed;
              for (const auto& entry : imputed[i].source_rows) {
                cells_imputed += model.tree().range(entry.first).size();
              }
              audit.push_back(audit_to_json(i, imputed[i], model.tree()));
            }
            const auto dir = output_dir(opts->run);
            write_csv(dir / "imputed.csv", data.test_raw.with_values(std::move(values)));
            open_output(dir / "audit.json") << audit.dump(2) << '\n';
            write_summary(opts->run, *sub,
                          {{"instances", imputed.size()},
                           {"imputed_instances", rows_imputed},
                           {"imputed_cells", cells_imputed},
                           {"depth", model.tree().depth()}});
          }};
}

Command simulate_command(CLI::App& app) {
  auto* sub = app.add_subcommand("simulate", "Corrupt a dataset with uniform-noise intervals");
  struct Options {
    RunOptions run;
    std::string input;
    bool header = false;
    bool labels = false;
    std::size_t rows = 500;
    GaussianClusterSpec cluster;
    CorruptionSpec spec;
    std::optional<std::size_t> image_rows;
    std::optional<std::size_t> image_cols;
  };
  auto opts = std::make_shared<Options>();
  add_run_options(*sub, opts->run);
  sub->add_option("--input", opts->input, "CSV to corrupt (default: synthetic Gaussian data)");
  sub->add_flag("--header", opts->header, "Input has a header row");
  sub->add_flag("--labels", opts->labels, "Input has a trailing label column");
  sub->add_option("--rows", opts->rows, "Synthetic rows");
  sub->add_option("--dims", opts->cluster.dims, "Synthetic dimensionality");
  sub->add_option("--cluster-mean", opts->cluster.mean, "Synthetic attribute mean");
  sub->add_option("--cluster-sd", opts->cluster.sd, "Synthetic attribute standard deviation");
  sub->add_option("--rho", opts->cluster.rho, "Synthetic AR(1) attribute correlation");
  sub->add_option("--pi", opts->spec.probability, "Per-instance corruption probability");
  sub->add_option("--fraction-lo", opts->spec.fraction_lo, "Shortest interval, fraction of d");
  sub->add_option("--fraction-hi", opts->spec.fraction_hi, "Longest interval, fraction of d");
  sub->add_option("--intervals-min", opts->spec.intervals_min, "Fewest intervals per instance");
  sub->add_option("--intervals-max", opts->spec.intervals_max, "Most intervals per instance");
  sub->add_option("--noise-lo", opts->spec.noise_lo, "Noise support lower end");
  sub->add_option("--noise-hi", opts->spec.noise_hi, "Noise support upper end");
  sub->add_option("--image-rows", opts->image_rows, "Square-region mode: image height");
  sub->add_option("--image-cols", opts->image_cols, "Square-region mode: image width");
  return {sub, [sub, opts] {
            apply_json_config(*sub, opts->run.config);
            const auto dir = output_dir(opts->run);
            Dataset clean;
            if (opts->input.empty()) {
              std::mt19937_64 rng = derived_rng(opts->run.seed, 1);
              clean = gaussian_cluster(opts->rows, opts->cluster, rng);
              write_csv(dir / "clean.csv", clean);
            } else {
              CsvOptions csv;
              csv.has_header = opts->header;
              csv.has_labels = opts->labels;
              clean = load_csv(opts->input, csv);
            }
            CorruptionSpec spec = opts->spec;
            spec.seed = opts->run.seed;
            if (opts->image_rows || opts->image_cols) {
              if (!opts->image_rows || !opts->image_cols) {
                throw ParameterError("image-rows", "square mode needs both image dimensions");
              }
              spec.square = ImageShape{*opts->image_rows, *opts->image_cols};
            }
            const CorruptedData out = corrupt(clean, spec);
            write_csv(dir / "corrupted.csv", out.data);
            write_masks(dir / "masks.csv", clean, out.masks);
            std::size_t instances = 0;
            std::size_t cells = 0;
            for (const auto& mask : out.masks) {
              const auto c = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
              cells += c;
              instances += c > 0 ? 1 : 0;
            }
            write_summary(opts->run, *sub,
                          {{"instances", clean.rows()},
                           {"corrupted_instances", instances},
                           {"corrupted_cells", cells}});
          }};
}

Command evaluate_command(CLI::App& app) {
  auto* sub = app.add_subcommand("evaluate", "ROC sweep and imputation metrics on masked data");
  struct Options {
    RunOptions run;
    DataOptions data;
    SeparationOptions sep;
    ImputeOptions imp;
    std::string masks;
    std::string originals;
    bool synthetic = false;
    SyntheticSuiteConfig suite;
    std::vector<double> tau_grid{0.005, 0.01, 0.02, 0.05, 0.1, 0.2};
    double ridge = 1e-6;
  };
  auto opts = std::make_shared<Options>();
  opts->sep.depth = 2;
  add_run_options(*sub, opts->run);
  add_data_options(*sub, opts->data);
  add_separation_options(*sub, opts->sep);
  add_impute_options(*sub, opts->imp);
  sub->add_option("--masks", opts->masks, "0/1 corruption mask CSV aligned with --test");
  sub->add_option("--originals", opts->originals, "Uncorrupted version of --test");
  sub->add_flag("--synthetic", opts->synthetic, "Use the built-in Gaussian corruption suite");
  sub->add_option("--reference-rows", opts->suite.reference_rows, "Synthetic reference rows");
  sub->add_option("--test-rows", opts->suite.test_rows, "Synthetic test rows");
  sub->add_option("--dims", opts->suite.cluster.dims, "Synthetic dimensionality");
  sub->add_option("--pi", opts->suite.corruption.probability, "Synthetic corruption probability");
  sub->add_option("--tau-grid", opts->tau_grid, "Per-node false alarm rates to sweep")
      ->delimiter(',');
  sub->add_option("--ridge", opts->ridge, "Ridge penalty of the linear classifier");
  return {sub, [sub, opts] {
            apply_json_config(*sub, opts->run.config);
            validate_ranges(opts->sep);
            const ImputeParams params = impute_params(opts->imp);
            const std::size_t threads = thread_count(opts->run);

            LoadedData data;
            std::vector<CorruptionMask> masks;
            std::optional<Dataset> originals_raw;
            if (opts->synthetic) {
              SyntheticSuiteConfig config = opts->suite;
              config.seed = opts->run.seed;
              SyntheticSuite suite = synthetic_suite(config);
              data = load_data(suite.reference, suite.test.data, opts->data.no_scale);
              masks = std::move(suite.test.masks);
              originals_raw = std::move(suite.clean_test);
            } else {
              require_option(*sub, "masks", !opts->masks.empty());
              data = load_files(*sub, opts->data);
              masks = read_masks(opts->masks, data.test.rows(), data.test.dims());
              if (!opts->originals.empty()) {
                originals_raw = load_csv(opts->originals, csv_options(opts->data));
              }
            }
            const ScoreModel model = build_model(data.reference, opts->sep, threads);
            const auto roc = roc_sweep(model, data.test, masks, opts->tau_grid, threads);

            const auto dir = output_dir(opts->run);
            std::ofstream csv = open_output(dir / "roc.csv");
            csv << "tau,detection_fa,detection_tp,localization_fa,localization_tp\n";
            nlohmann::json roc_json = nlohmann::json::array();
            for (const RocPoint& p : roc) {
              csv << format_real(p.tau) << ',' << csv_cell(p.detection_fa) << ','
                  << csv_cell(p.detection_tp) << ',' << csv_cell(p.localization_fa) << ','
                  << csv_cell(p.localization_tp) << '\n';
              roc_json.push_back(roc_point_to_json(p));
            }
            nlohmann::json metrics{{"roc", std::move(roc_json)}, {"depth", model.tree().depth()}};

            if (originals_raw) {
              const Dataset originals = scaled_like(*originals_raw, data);
              if (originals.rows() != data.test.rows() || originals.dims() != data.test.dims()) {
                throw DataError("--originals must match the shape of --test");
              }
              std::vector<std::vector<double>> imputed(data.test.rows());
              parallel_for(
                  data.test.rows(),
                  [&](std::size_t i) {
                    QueryEvaluator query(model, data.test.row(i));
                    imputed[i] = impute(query, tcs_separate(query, opts->sep.tau), params).values;
                  },
                  threads);
              std::vector<std::size_t> corrupted_rows;
              std::vector<double> all_imputed;
              for (std::size_t i = 0; i < masks.size(); ++i) {
                if (std::find(masks[i].begin(), masks[i].end(), true) != masks[i].end()) {
                  corrupted_rows.push_back(i);
                }
                all_imputed.insert(all_imputed.end(), imputed[i].begin(), imputed[i].end());
              }
              const Dataset imputed_all = data.test.with_values(std::move(all_imputed));
              const ImputationQuality q = imputation_quality(originals.select_rows(corrupted_rows),
                                                             data.test.select_rows(corrupted_rows),
                                                             imputed_all.select_rows(corrupted_rows));
              metrics["imputation_quality"] = q.mean ? nlohmann::json(*q.mean) : nlohmann::json(nullptr);
              metrics["imputation_quality_excluded"] = q.excluded;
              metrics["imputation_tau"] = opts->sep.tau;

              if (data.reference.has_labels() && data.test.has_labels()) {
                const LinearModel clf = train_linear_classifier(data.reference, opts->ridge);
                const double clean = accuracy(clf, originals);
                const double corrupt = accuracy(clf, data.test);
                const double fixed = accuracy(clf, imputed_all);
                const auto gain = accuracy_improvement(clean, corrupt, fixed);
                metrics["accuracy_clean"] = clean;
                metrics["accuracy_corrupted"] = corrupt;
                metrics["accuracy_imputed"] = fixed;
                metrics["accuracy_improvement_percent"] = gain ? nlohmann::json(*gain) : nlohmann::json(nullptr);
                if (data.reference.dims() >= 2) {
                  const Projector proj = principal_projector(data.reference, 2);
                  metrics["mean_separation"] = {{"clean", mean_separation(originals, proj)},
                                                {"corrupted", mean_separation(data.test, proj)},
                                                {"imputed", mean_separation(imputed_all, proj)}};
                }
              }
            }
            write_summary(opts->run, *sub, std::move(metrics));
          }};
}

Command famodel_command(CLI::App& app) {
  auto* sub = app.add_subcommand("famodel", "Analytic whole-tree false alarm rate table");
  struct Options {
    RunOptions run;
    std::vector<double> tau_grid{0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.128, 0.2};
    std::vector<double> theta_grid{0.0, 0.5, 0.75, 0.8, 1.0};
    std::vector<std::size_t> depths{2, 3, 6};
  };
  auto opts = std::make_shared<Options>();
  add_run_options(*sub, opts->run);
  sub->add_option("--tau-grid", opts->tau_grid, "Per-node false alarm rates")
      ->delimiter(',');
  sub->add_option("--theta-grid", opts->theta_grid, "Label dependency values")
      ->delimiter(',');
  sub->add_option("--depths", opts->depths, "Tree depths; depth <= 3 adds the exhaustive column")
      ->delimiter(',');
  return {sub, [sub, opts] {
            apply_json_config(*sub, opts->run.config);
            std::ofstream csv = open_output(output_dir(opts->run) / "famodel.csv");
            csv << "tau,theta,L,C_tau_analytic,C_tau_bruteforce\n";
            std::size_t rows = 0;
            for (std::size_t depth : opts->depths) {
              for (double theta : opts->theta_grid) {
                for (double tau : opts->tau_grid) {
                  FaModelParams p;
                  p.tau = tau;
                  p.theta = theta;
                  p.depth = depth;
                  csv << format_real(tau) << ',' << format_real(theta) << ',' << depth << ','
                      << format_real(fa_recursion(p)) << ','
                      << (depth <= 3 ? format_real(fa_bruteforce(p)) : std::string()) << '\n';
                  ++rows;
                }
              }
            }
            write_summary(opts->run, *sub, {{"rows", rows}});
          }};
}

Command gaussian_command(CLI::App& app) {
  auto* sub = app.add_subcommand("gaussian", "Two-Gaussian MAP imputation benchmark");
  struct Options {
    RunOptions run;
    GaussianBenchmarkConfig config;
  };
  auto opts = std::make_shared<Options>();
  opts->run.seed = opts->config.seed;
  add_run_options(*sub, opts->run);
  sub->add_option("--k-grid", opts->config.k_grid, "Candidate neighborhood sizes")
      ->delimiter(',');
  sub->add_option("--trials", opts->config.trials, "Repetitions averaged per row");
  sub->add_option("--score-k", opts->config.score_k, "K of the parent-range score");
  sub->add_option("--per-class", opts->config.per_class, "Samples per class");
  sub->add_option("--ridge", opts->config.ridge, "Ridge penalty of the linear classifier");
  return {sub, [sub, opts] {
            apply_json_config(*sub, opts->run.config);
            GaussianBenchmarkConfig config = opts->config;
            config.seed = opts->run.seed;
            config.threads = thread_count(opts->run);
            const auto table = gaussian_benchmark(config);
            std::ofstream csv = open_output(output_dir(opts->run) / "gaussian.csv");
            csv << "K,MSE,accuracy,MSE_std_error,accuracy_std_error\n";
            nlohmann::json rows = nlohmann::json::array();
            for (const auto& r : table) {
              csv << r.k << ',' << format_real(r.mse) << ',' << format_real(100.0 * r.accuracy)
                  << ',' << format_real(r.mse_std_error) << ','
                  << format_real(100.0 * r.accuracy_std_error) << '\n';
              rows.push_back({{"K", r.k},
                              {"MSE", r.mse},
                              {"accuracy_percent", 100.0 * r.accuracy}});
            }
            write_summary(opts->run, *sub, {{"table", std::move(rows)}});
          }};
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app) {
  return {detect_command(app),   impute_command(app),  simulate_command(app),
          evaluate_command(app), famodel_command(app), gaussian_command(app)};
}

}  // namespace corrsep::cli
