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
#include <random>
#include <vector>

#include "corrsep/dataset.hpp"

namespace corrsep {

using CorruptionMask = std::vector<bool>;

// Image geometry for square-region corruption. Attributes are the image
// vectorized column by column: pixel (r, c) is attribute c * rows + r.
struct ImageShape {
  std::size_t rows = 0;
  std::size_t cols = 0;
};

struct CorruptionSpec {
  double probability = 1.0;  // chance that an instance is corrupted
  // Interval length as a fraction of d, per interval. In square mode the
  // fractions bound the region area instead.
  double fraction_lo = 0.1;
  double fraction_hi = 0.5;
  std::size_t intervals_min = 1;
  std::size_t intervals_max = 1;
  double noise_lo = 0.0;
  double noise_hi = 1.0;
  std::uint64_t seed = 0;
  std::optional<ImageShape> square;
};

struct CorruptedData {
  Dataset data;
  std::vector<CorruptionMask> masks;  // one per row
};

// Throws ParameterError naming the field for an invalid or infeasible spec.
void validate(const CorruptionSpec& spec, std::size_t dims);

// Overwrites random attribute intervals (or image squares) with i.i.d.
// uniform noise. Deterministic for a given spec.seed; cells outside the
// returned masks are bit-identical to the input.
CorruptedData corrupt(const Dataset& data, const CorruptionSpec& spec);

// Unimodal Gaussian with AR(1) correlation along the attribute axis.
struct GaussianClusterSpec {
  std::size_t dims = 16;
  double mean = 0.5;
  double sd = 0.08;
  double rho = 0.6;
};

Dataset gaussian_cluster(std::size_t rows, const GaussianClusterSpec& spec, std::mt19937_64& rng);

// Two unit-covariance Gaussian classes in the plane with means (1,-1) and
// (-1,1), labeled 0 and 1, `per_class` rows each (class 0 first).
Dataset two_gaussians(std::size_t per_class, std::mt19937_64& rng);

Dataset uniform_data(std::size_t rows, std::size_t dims, std::mt19937_64& rng);

// Independent generator for sub-task `index` of a seeded run.
std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace corrsep
