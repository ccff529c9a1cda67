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

#include "corrsep/evaluate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "corrsep/classifier.hpp"
#include "corrsep/distance.hpp"
#include "corrsep/error.hpp"
#include "corrsep/impute.hpp"
#include "corrsep/parallel.hpp"

namespace corrsep {
namespace {

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

struct RowCounts {
  bool detected = false;
  std::size_t hit_corrupt = 0;  // declared and truly corrupted attributes
  std::size_t hit_clean = 0;    // declared but clean attributes
};

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_error_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

std::vector<RocPoint> roc_sweep(const ScoreModel& model, const Dataset& test,
                                std::span<const CorruptionMask> masks,
                                std::span<const double> tau_grid, std::size_t threads) {
  if (masks.size() != test.rows()) throw DataError("one corruption mask per test row required");
  for (const auto& mask : masks) {
    if (mask.size() != test.dims()) throw DataError("mask length differs from dimensionality");
  }
  for (double tau : tau_grid) {
    if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("tau", "grid values must lie in (0,1)");
  }
  const std::size_t taus = tau_grid.size();
  std::vector<RowCounts> counts(test.rows() * taus);
  parallel_for(
      test.rows(),
      [&](std::size_t i) {
        QueryEvaluator query(model, test.row(i));
        for (std::size_t t = 0; t < taus; ++t) {
          const SeparationResult result = tcs_separate(query, tau_grid[t]);
          RowCounts& c = counts[i * taus + t];
          c.detected = result.detected;
          for (std::size_t a : result.corrupted) {
            (masks[i][a] ? c.hit_corrupt : c.hit_clean) += 1;
          }
        }
      },
      threads);

  std::size_t positives = 0;
  std::size_t corrupt_cells = 0;
  for (const auto& mask : masks) {
    const auto cells = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
    corrupt_cells += cells;
    if (cells > 0) ++positives;
  }
  const std::size_t negatives = test.rows() - positives;
  const std::size_t clean_cells = test.rows() * test.dims() - corrupt_cells;

  std::vector<RocPoint> out(taus);
  for (std::size_t t = 0; t < taus; ++t) {
    std::size_t det_tp = 0;
    std::size_t det_fa = 0;
    std::size_t loc_tp = 0;
    std::size_t loc_fa = 0;
    for (std::size_t i = 0; i < test.rows(); ++i) {
      const RowCounts& c = counts[i * taus + t];
      const bool positive = std::find(masks[i].begin(), masks[i].end(), true) != masks[i].end();
      if (c.detected) (positive ? det_tp : det_fa) += 1;
      loc_tp += c.hit_corrupt;
      loc_fa += c.hit_clean;
    }
    out[t] = {tau_grid[t], ratio(det_fa, negatives), ratio(det_tp, positives),
              ratio(loc_fa, clean_cells), ratio(loc_tp, corrupt_cells)};
  }
  return out;
}

ImputationQuality imputation_quality(const Dataset& originals, const Dataset& corrupted,
                                     const Dataset& imputed) {
  if (originals.rows() != corrupted.rows() || originals.rows() != imputed.rows() ||
      originals.dims() != corrupted.dims() || originals.dims() != imputed.dims()) {
    throw DataError("imputation quality needs three aligned datasets");
  }
  ImputationQuality q;
  double sum = 0.0;
  for (std::size_t i = 0; i < originals.rows(); ++i) {
    const double before = std::sqrt(squared_euclidean(originals.row(i), corrupted.row(i)));
    if (before == 0.0) {
      ++q.excluded;
      continue;
    }
    const double after = std::sqrt(squared_euclidean(originals.row(i), imputed.row(i)));
    sum += (before - after) / before;
    ++q.used;
  }
  if (q.used > 0) q.mean = sum / static_cast<double>(q.used);
  return q;
}

std::optional<double> accuracy_improvement(double acc_clean, double acc_corrupt,
                                           double acc_imputed) {
  const double gap = acc_clean - acc_corrupt;
  if (gap == 0.0) return std::nullopt;
  return 100.0 * (acc_imputed - acc_corrupt) / gap;
}

std::vector<double> Projector::project(std::span<const double> x) const {
  if (x.size() != dims) throw DataError("projection input has the wrong dimensionality");
  std::vector<double> out(count(), 0.0);
  for (std::size_t c = 0; c < out.size(); ++c) {
    for (std::size_t a = 0; a < dims; ++a) out[c] += components[c * dims + a] * (x[a] - mean[a]);
  }
  return out;
}

Projector principal_projector(const Dataset& train, std::size_t count) {
  if (train.rows() < 2) throw DataError("principal directions need at least two rows");
  if (count < 1 || count > train.dims()) {
    throw ParameterError("components", "must lie in [1, dims]");
  }
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const auto n = static_cast<Eigen::Index>(train.rows());
  const auto d = static_cast<Eigen::Index>(train.dims());
  const Eigen::Map<const RowMatrix> x(train.values().data(), n, d);
  const Eigen::RowVectorXd mu = x.colwise().mean();
  const Eigen::MatrixXd centered = x.rowwise() - mu;
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);

  Projector p;
  p.dims = train.dims();
  p.mean.assign(mu.data(), mu.data() + d);
  p.components.resize(count * p.dims);
  // Eigenvalues come in increasing order.
  for (std::size_t c = 0; c < count; ++c) {
    const Eigen::Index col = d - 1 - static_cast<Eigen::Index>(c);
    for (Eigen::Index a = 0; a < d; ++a) {
      p.components[c * p.dims + static_cast<std::size_t>(a)] = eig.eigenvectors()(a, col);
    }
  }
  return p;
}

double mean_separation(const Dataset& test, const Projector& projector) {
  if (!test.has_labels()) throw DataError("mean separation needs labeled data");
  std::vector<int> classes = test.labels();
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() != 2) throw DataError("mean separation needs exactly two classes");

  const std::size_t m = projector.count();
  std::vector<std::vector<double>> sums(2, std::vector<double>(m, 0.0));
  std::vector<std::size_t> sizes(2, 0);
  for (std::size_t i = 0; i < test.rows(); ++i) {
    const std::size_t c = test.labels()[i] == classes[0] ? 0 : 1;
    const auto y = projector.project(test.row(i));
    for (std::size_t j = 0; j < m; ++j) sums[c][j] += y[j];
    ++sizes[c];
  }
  double sq = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double diff = sums[0][j] / static_cast<double>(sizes[0]) -
                        sums[1][j] / static_cast<double>(sizes[1]);
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

std::vector<GaussianBenchmarkRow> gaussian_benchmark(const GaussianBenchmarkConfig& config) {
  if (config.trials < 1) throw ParameterError("trials", "must be >= 1");
  if (config.k_grid.empty()) throw ParameterError("k", "grid must not be empty");
  if (config.per_class < 2) throw ParameterError("per_class", "must be >= 2");
  const std::size_t grid = config.k_grid.size();
  const std::size_t rows = 2 * config.per_class;
  for (std::size_t k : config.k_grid) {
    if (k < 1 || k >= rows) throw ParameterError("k", "neighborhood sizes must lie in [1, N-1]");
  }

  const PartitionTree tree(2, 1);
  const std::size_t missing = tree.right(PartitionTree::kRoot);
  std::vector<double> mse(config.trials * grid);
  std::vector<double> acc(config.trials * grid);

  parallel_for(
      config.trials,
      [&](std::size_t trial) {
        std::mt19937_64 rng = derived_rng(config.seed, trial);
        const Dataset data = two_gaussians(config.per_class, rng);
        const LinearModel classifier = train_linear_classifier(data, config.ridge);
        AnomalyParams params;
        params.k_neighbors = config.score_k;
        params.alpha = 1.0;
        const ScoreModel model(data, tree, params, 1);

        std::vector<std::vector<double>> imputed(grid, data.values());
        for (std::size_t i = 0; i < rows; ++i) {
          const std::vector<double> instance{data.at(i, 0), 0.0};
          QueryEvaluator query(model, instance);
          for (std::size_t g = 0; g < grid; ++g) {
            ImputeParams ip;
            ip.neighborhood_size = config.k_grid[g];
            ip.exclude_row = i;
            imputed[g][i * 2 + 1] = map_impute_node(query, missing, ip).values[0];
          }
        }
        for (std::size_t g = 0; g < grid; ++g) {
          double sq = 0.0;
          for (std::size_t i = 0; i < rows; ++i) {
            const double err = imputed[g][i * 2 + 1] - data.at(i, 1);
            sq += err * err;
          }
          mse[trial * grid + g] = sq / static_cast<double>(rows);
          acc[trial * grid + g] = accuracy(classifier, data.with_values(imputed[g]));
        }
      },
      config.threads);

  std::vector<GaussianBenchmarkRow> out(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    std::vector<double> m(config.trials);
    std::vector<double> a(config.trials);
    for (std::size_t t = 0; t < config.trials; ++t) {
      m[t] = mse[t * grid + g];
      a[t] = acc[t * grid + g];
    }
    out[g] = {config.k_grid[g], mean_of(m), mean_of(a), std_error_of(m), std_error_of(a)};
  }
  return out;
}

SyntheticSuite synthetic_suite(const SyntheticSuiteConfig& config) {
  std::mt19937_64 ref_rng = derived_rng(config.seed, 0);
  std::mt19937_64 test_rng = derived_rng(config.seed, 1);
  SyntheticSuite suite;
  suite.reference = gaussian_cluster(config.reference_rows, config.cluster, ref_rng);
  suite.clean_test = gaussian_cluster(config.test_rows, config.cluster, test_rng);
  CorruptionSpec spec = config.corruption;
  spec.seed = config.seed ^ 0x9e3779b97f4a7c15ULL;
  suite.test = corrupt(suite.clean_test, spec);
  return suite;
}

}  // namespace corrsep
