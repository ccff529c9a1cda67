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
#include <optional>
#include <span>
#include <vector>

#include "corrsep/dataset.hpp"
#include "corrsep/separation.hpp"
#include "corrsep/simulate.hpp"

namespace corrsep {

// Rates are absent when their denominator is empty (no corrupted instances,
// no clean attributes, ...).
struct RocPoint {
  double tau = 0.0;
  std::optional<double> detection_fa;
  std::optional<double> detection_tp;
  std::optional<double> localization_fa;
  std::optional<double> localization_tp;
};

// Detection rates count instances (an instance is positive when its mask has
// any corrupted attribute); localization rates pool attributes over all
// instances. Every tau must lie in (0,1).
std::vector<RocPoint> roc_sweep(const ScoreModel& model, const Dataset& test,
                                std::span<const CorruptionMask> masks,
                                std::span<const double> tau_grid, std::size_t threads = 0);

struct ImputationQuality {
  std::optional<double> mean;  // absent when every instance was excluded
  std::size_t used = 0;
  std::size_t excluded = 0;    // instances whose corruption moved nothing
};

// Mean over instances of (|x_bar - x| - |x_bar - x_hat|) / |x_bar - x| with
// Euclidean norms, where x_bar is the original, x the corrupted and x_hat the
// imputed instance. Pass the corrupted instances only.
ImputationQuality imputation_quality(const Dataset& originals, const Dataset& corrupted,
                                     const Dataset& imputed);

// 100 (imputed - corrupt) / (clean - corrupt); absent when clean == corrupt.
std::optional<double> accuracy_improvement(double acc_clean, double acc_corrupt,
                                           double acc_imputed);

// Orthonormal leading principal directions of a training set.
struct Projector {
  std::size_t dims = 0;
  std::vector<double> mean;
  std::vector<double> components;  // row-major count x dims

  std::size_t count() const { return dims == 0 ? 0 : components.size() / dims; }
  std::vector<double> project(std::span<const double> x) const;
};

Projector principal_projector(const Dataset& train, std::size_t count = 2);

// Distance between the two class means of `test` after projection. Throws
// DataError unless exactly two classes are present.
double mean_separation(const Dataset& test, const Projector& projector);

struct GaussianBenchmarkConfig {
  std::vector<std::size_t> k_grid{1, 4, 8, 12, 16};
  std::size_t trials = 100;
  std::uint64_t seed = 20170;
  std::size_t per_class = 500;
  // K of the parent-range score that ranks candidates; the grid varies the
  // candidate neighborhood size.
  int score_k = 1;
  double ridge = 1e-6;
  std::size_t threads = 0;
};

struct GaussianBenchmarkRow {
  std::size_t k = 0;
  double mse = 0.0;
  double accuracy = 0.0;  // fraction in [0,1]
  double mse_std_error = 0.0;
  double accuracy_std_error = 0.0;
};

// Two-class planar Gaussian benchmark: the second attribute of every sample
// is treated as missing and imputed leave-one-out from the remaining samples
// by conditioning on the first attribute. Reports the imputation MSE and the
// accuracy, on the imputed data, of a linear classifier trained on the clean
// data, both averaged over trials.
std::vector<GaussianBenchmarkRow> gaussian_benchmark(const GaussianBenchmarkConfig& config);

// Half of the instances corrupted, each on one interval spanning half the
// attributes.
inline CorruptionSpec half_span_corruption() {
  CorruptionSpec spec;
  spec.probability = 0.5;
  spec.fraction_lo = 0.5;
  spec.fraction_hi = 0.5;
  return spec;
}

// Correlated unimodal Gaussian reference set plus a test set in which each
// row is corrupted with probability `corruption.probability`.
struct SyntheticSuiteConfig {
  GaussianClusterSpec cluster;
  std::size_t reference_rows = 500;
  std::size_t test_rows = 400;
  CorruptionSpec corruption = half_span_corruption();
  std::uint64_t seed = 7;
};

struct SyntheticSuite {
  Dataset reference;
  Dataset clean_test;
  CorruptedData test;
};

SyntheticSuite synthetic_suite(const SyntheticSuiteConfig& config);

}  // namespace corrsep
