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

#include <algorithm>
#include <cmath>

#include "corrsep/classifier.hpp"
#include "corrsep/error.hpp"
#include "corrsep/evaluate.hpp"
#include "corrsep/fa_model.hpp"
#include "corrsep/json_io.hpp"
#include "corrsep/simulate.hpp"
#include "oracles.hpp"

namespace corrsep {
namespace {

std::size_t runs_of_true(const CorruptionMask& mask) {
  std::size_t runs = 0;
  for (std::size_t a = 0; a < mask.size(); ++a) {
    if (mask[a] && (a == 0 || !mask[a - 1])) ++runs;
  }
  return runs;
}

Dataset uniform(std::size_t rows, std::size_t dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return uniform_data(rows, dims, rng);
}

TEST(Corrupt, ZeroProbabilityIsIdentity) {
  const Dataset data = uniform(50, 10, 90);
  CorruptionSpec spec;
  spec.probability = 0.0;
  const CorruptedData out = corrupt(data, spec);
  EXPECT_EQ(out.data.values(), data.values());
  for (const auto& m : out.masks) EXPECT_EQ(std::count(m.begin(), m.end(), true), 0);
}

TEST(Corrupt, HalfSpanIntervalIsContiguous) {
  const Dataset data = uniform(200, 10, 91);
  CorruptionSpec spec;
  spec.fraction_lo = spec.fraction_hi = 0.5;
  spec.seed = 3;
  const CorruptedData out = corrupt(data, spec);
  for (const auto& m : out.masks) {
    EXPECT_EQ(std::count(m.begin(), m.end(), true), 5);
    EXPECT_EQ(runs_of_true(m), 1u);
  }
}

TEST(Corrupt, CellsOutsideMaskAreUntouched) {
  const Dataset data = uniform(300, 24, 92);
  CorruptionSpec spec;
  spec.probability = 0.6;
  spec.intervals_max = 3;
  spec.fraction_lo = 0.05;
  spec.fraction_hi = 0.2;
  spec.noise_lo = 2.0;
  spec.noise_hi = 3.0;
  spec.seed = 4;
  const CorruptedData out = corrupt(data, spec);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    EXPECT_LE(runs_of_true(out.masks[i]), 3u);
    for (std::size_t a = 0; a < data.dims(); ++a) {
      if (out.masks[i][a]) {
        EXPECT_GE(out.data.at(i, a), 2.0);
        EXPECT_LT(out.data.at(i, a), 3.0);
      } else {
        EXPECT_EQ(out.data.at(i, a), data.at(i, a));
      }
    }
  }
}

TEST(Corrupt, VectorizedSquareSpansSeveralIntervals) {
  const Dataset data = uniform(40, 256, 93);
  CorruptionSpec spec;
  spec.fraction_lo = 0.1;
  spec.fraction_hi = 0.5;
  spec.square = ImageShape{16, 16};
  spec.seed = 5;
  const CorruptedData out = corrupt(data, spec);
  for (const auto& m : out.masks) {
    const auto cells = static_cast<std::size_t>(std::count(m.begin(), m.end(), true));
    const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(cells))));
    EXPECT_EQ(side * side, cells);
    EXPECT_EQ(runs_of_true(m), side);
    EXPECT_GE(cells, 26u);
    EXPECT_LE(cells, 128u);
  }
}

TEST(Corrupt, SameSeedSameOutput) {
  const Dataset data = uniform(30, 12, 94);
  CorruptionSpec spec;
  spec.seed = 77;
  EXPECT_EQ(corrupt(data, spec).data.values(), corrupt(data, spec).data.values());
}

TEST(Corrupt, InvalidSpecsNameTheirKey) {
  const Dataset data = uniform(3, 10, 95);
  auto key_of = [&](CorruptionSpec spec) {
    try {
      corrupt(data, spec);
    } catch (const ParameterError& e) {
      return e.key();
    }
    return std::string("none");
  };
  CorruptionSpec pi;
  pi.probability = 1.5;
  EXPECT_EQ(key_of(pi), "pi");
  CorruptionSpec frac;
  frac.fraction_lo = 0.6;
  frac.fraction_hi = 0.4;
  EXPECT_EQ(key_of(frac), "fraction");
  CorruptionSpec crowded;
  crowded.intervals_min = crowded.intervals_max = 4;
  crowded.fraction_lo = crowded.fraction_hi = 0.3;
  EXPECT_EQ(key_of(crowded), "intervals");
}

class RocFixture : public ::testing::Test {
 protected:
  static SyntheticSuite suite() {
    SyntheticSuiteConfig config;
    config.reference_rows = 300;
    config.test_rows = 200;
    config.seed = 96;
    return synthetic_suite(config);
  }
  static AnomalyParams params() {
    AnomalyParams p;
    p.alpha = 1.0;
    p.k_neighbors = 8;
    return p;
  }
};

TEST_F(RocFixture, CleanTestSetHasNoTruePositiveRates) {
  const SyntheticSuite s = suite();
  const ScoreModel model(s.reference, build_partition(16, 2), params());
  std::vector<CorruptionMask> clean(s.clean_test.rows(), CorruptionMask(16, false));
  const std::vector<double> grid{0.05};
  const auto roc = roc_sweep(model, s.clean_test, clean, grid);
  ASSERT_EQ(roc.size(), 1u);
  EXPECT_FALSE(roc[0].detection_tp.has_value());
  EXPECT_FALSE(roc[0].localization_tp.has_value());
  AnomalyParams at = params();
  at.tau = 0.05;
  const ScoreModel tuned(s.reference, build_partition(16, 2), at);
  EXPECT_DOUBLE_EQ(*roc[0].detection_fa, fa_empirical(tuned, s.clean_test).rate);
}

TEST_F(RocFixture, RatesAreMonotoneInTau) {
  const SyntheticSuite s = suite();
  const ScoreModel model(s.reference, build_partition(16, 2), params());
  const std::vector<double> grid{0.005, 0.01, 0.05, 0.1, 0.2};
  const auto roc = roc_sweep(model, s.test.data, s.test.masks, grid);
  for (std::size_t t = 1; t < roc.size(); ++t) {
    EXPECT_GE(*roc[t].detection_fa, *roc[t - 1].detection_fa);
    EXPECT_GE(*roc[t].detection_tp, *roc[t - 1].detection_tp);
  }
  EXPECT_GT(*roc[3].detection_tp, *roc[1].detection_tp - 1e-12);
  for (const auto& p : roc) EXPECT_GT(*p.localization_tp, *p.localization_fa);
}

TEST(RocSweep, RejectsBadInputs) {
  const Dataset ref = uniform(30, 4, 97);
  AnomalyParams p;
  p.k_neighbors = 2;
  const ScoreModel model(ref, build_partition(4, 1), p);
  std::vector<CorruptionMask> masks(ref.rows(), CorruptionMask(4, false));
  const std::vector<double> zero{0.0};
  EXPECT_THROW(roc_sweep(model, ref, masks, zero), ParameterError);
  masks.pop_back();
  const std::vector<double> ok{0.1};
  EXPECT_THROW(roc_sweep(model, ref, masks, ok), DataError);
}

TEST(ImputationQuality, Endpoints) {
  const Dataset originals = uniform(20, 6, 98);
  CorruptionSpec spec;
  spec.seed = 9;
  spec.noise_lo = 5.0;
  spec.noise_hi = 6.0;
  const CorruptedData corrupted = corrupt(originals, spec);
  EXPECT_EQ(*imputation_quality(originals, corrupted.data, originals).mean, 1.0);
  EXPECT_EQ(*imputation_quality(originals, corrupted.data, corrupted.data).mean, 0.0);
  const ImputationQuality none = imputation_quality(originals, originals, originals);
  EXPECT_FALSE(none.mean.has_value());
  EXPECT_EQ(none.excluded, 20u);
}

TEST(ImputationQuality, HalfwayRepairScoresHalf) {
  const Dataset x = Dataset::from_rows({{0.0, 0.0}});
  const Dataset z = Dataset::from_rows({{4.0, 0.0}});
  const Dataset y = Dataset::from_rows({{2.0, 0.0}});
  EXPECT_DOUBLE_EQ(*imputation_quality(x, z, y).mean, 0.5);
}

TEST(AccuracyImprovement, Examples) {
  EXPECT_DOUBLE_EQ(*accuracy_improvement(0.9, 0.6, 0.9), 100.0);
  EXPECT_DOUBLE_EQ(*accuracy_improvement(0.9, 0.6, 0.6), 0.0);
  EXPECT_NEAR(*accuracy_improvement(99.71, 90.57, 96.85),
              oracle::improvement_percent(99.71, 90.57, 96.85), 1e-12);
  EXPECT_NEAR(*accuracy_improvement(99.71, 90.57, 96.85), 68.7, 0.1);
  EXPECT_FALSE(accuracy_improvement(0.8, 0.8, 0.9).has_value());
}

TEST(AccuracyImprovement, InvariantUnderCommonAffineMap) {
  const double base = *accuracy_improvement(0.93, 0.71, 0.85);
  EXPECT_NEAR(*accuracy_improvement(93.0, 71.0, 85.0), base, 1e-12);
  EXPECT_NEAR(*accuracy_improvement(0.93 * 3 + 1, 0.71 * 3 + 1, 0.85 * 3 + 1), base, 1e-12);
}

Dataset blobs(std::size_t per_class, double gap, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.2);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < per_class; ++i) {
    rows.push_back({g(rng), g(rng)});
    labels.push_back(3);
    rows.push_back({gap + g(rng), gap + g(rng)});
    labels.push_back(7);
  }
  return Dataset::from_rows(rows, labels);
}

TEST(LinearClassifier, SeparableBlobsAreLearnedExactly) {
  const Dataset train = blobs(100, 3.0, 99);
  const LinearModel model = train_linear_classifier(train, 1e-6);
  EXPECT_EQ(accuracy(model, train), 1.0);
  EXPECT_EQ(model.classes(), (std::vector<int>{3, 7}));
}

TEST(LinearClassifier, HugeRidgeShrinksWeightsToZero) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::mt19937_64 rng(100);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 90; ++i) {
    rows.push_back({g(rng) + (i < 60 ? 0.0 : 1.0), g(rng)});
    labels.push_back(i < 60 ? 0 : 1);
  }
  const Dataset data = Dataset::from_rows(rows, labels);
  const LinearModel model = train_linear_classifier(data, 1e12);
  for (double w : model.weights()) EXPECT_LT(std::abs(w), 1e-9);
  EXPECT_NEAR(accuracy(model, data), 60.0 / 90.0, 1e-12);
}

TEST(LinearClassifier, TwoGaussianBenchmarkAccuracy) {
  std::mt19937_64 rng(101);
  const Dataset data = two_gaussians(500, rng);
  const LinearModel model = train_linear_classifier(data, 1e-6);
  EXPECT_NEAR(accuracy(model, data), 0.92, 0.02);
}

TEST(MeanSeparation, Examples) {
  Projector identity;
  identity.dims = 2;
  identity.mean = {0.0, 0.0};
  identity.components = {1.0, 0.0, 0.0, 1.0};
  const Dataset same = Dataset::from_rows({{1, 1}, {1, 1}, {2, 2}, {0, 0}}, std::vector<int>{0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(mean_separation(same, identity), 0.0);
  const Dataset apart = Dataset::from_rows({{-1, 0}, {1, 0}, {3, 4}, {3, 4}}, std::vector<int>{0, 0, 1, 1});
  EXPECT_DOUBLE_EQ(mean_separation(apart, identity), 5.0);
}

TEST(PrincipalProjector, RecoversDominantAxis) {
  std::mt19937_64 rng(102);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 400; ++i) rows.push_back({5.0 * g(rng), 0.1 * g(rng), 2.0 * g(rng)});
  const Projector p = principal_projector(Dataset::from_rows(rows));
  ASSERT_EQ(p.count(), 2u);
  EXPECT_GT(std::abs(p.components[0]), 0.99);
  EXPECT_GT(std::abs(p.components[5]), 0.99);
}

TEST(GaussianBenchmark, SmallRunIsDeterministicAndShaped) {
  GaussianBenchmarkConfig config;
  config.k_grid = {1, 8};
  config.trials = 2;
  config.per_class = 100;
  const auto a = gaussian_benchmark(config);
  config.threads = 1;
  const auto b = gaussian_benchmark(config);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].k, config.k_grid[i]);
    EXPECT_EQ(a[i].mse, b[i].mse);
    EXPECT_EQ(a[i].accuracy, b[i].accuracy);
    EXPECT_GT(a[i].mse, 0.0);
  }
  EXPECT_LT(a[1].mse, a[0].mse);
}

TEST(GaussianBenchmark, RejectsNeighborhoodAsLargeAsSample) {
  GaussianBenchmarkConfig config;
  config.k_grid = {200};
  config.per_class = 100;
  config.trials = 1;
  EXPECT_THROW(gaussian_benchmark(config), ParameterError);
}

TEST(JsonIo, ScalingRoundTrip) {
  const ScalingParams p{{0.0, -1.5}, {2.0, 1e-9}};
  const ScalingParams back = scaling_from_json(scaling_to_json(p));
  EXPECT_EQ(back.min, p.min);
  EXPECT_EQ(back.max, p.max);
  EXPECT_THROW(scaling_from_json(nlohmann::json{{"min", {1.0}}}), DataError);
}

TEST(JsonIo, SeparationKeysNodesByPath) {
  const PartitionTree tree = build_partition(4, 1);
  const std::vector<Label> labels{Label::kAnomalous, Label::kNormal, Label::kAnomalous};
  const SeparationResult result = separate_from_labels(tree, labels);
  const nlohmann::json doc = separation_to_json(result, tree);
  EXPECT_EQ(doc["detected"], true);
  EXPECT_EQ(doc["corrupted_attributes"], nlohmann::json::array({2, 3}));
  EXPECT_EQ(doc["node_labels"].size(), 3u);
  EXPECT_EQ(doc.dump().find("unvisited"), std::string::npos);
}

TEST(JsonIo, AbsentRatesAreNull) {
  RocPoint p;
  p.tau = 0.1;
  p.detection_fa = 0.25;
  const nlohmann::json doc = roc_point_to_json(p);
  EXPECT_EQ(doc["detection_fa"], 0.25);
  EXPECT_TRUE(doc["detection_tp"].is_null());
}

}  // namespace
}  // namespace corrsep
