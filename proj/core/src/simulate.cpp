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

#include "corrsep/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "corrsep/error.hpp"

namespace corrsep {
namespace {

constexpr double kSlack = 1e-9;
constexpr int kMaxPlacementAttempts = 10000;

struct LengthBounds {
  std::size_t lo = 0;
  std::size_t hi = 0;
};

LengthBounds interval_bounds(const CorruptionSpec& spec, std::size_t dims) {
  const double d = static_cast<double>(dims);
  const auto lo = static_cast<std::size_t>(std::ceil(spec.fraction_lo * d - kSlack));
  const auto hi = static_cast<std::size_t>(std::floor(spec.fraction_hi * d + kSlack));
  return {std::max<std::size_t>(lo, 1), std::min(hi, dims)};
}

LengthBounds square_bounds(const CorruptionSpec& spec) {
  const ImageShape& shape = *spec.square;
  const double area = static_cast<double>(shape.rows * shape.cols);
  const auto lo = static_cast<std::size_t>(std::ceil(std::sqrt(spec.fraction_lo * area) - kSlack));
  const auto hi = static_cast<std::size_t>(std::floor(std::sqrt(spec.fraction_hi * area) + kSlack));
  return {std::max<std::size_t>(lo, 1), std::min({hi, shape.rows, shape.cols})};
}

bool overlaps(const std::vector<AttributeRange>& placed, AttributeRange candidate) {
  return std::any_of(placed.begin(), placed.end(), [&](const AttributeRange& r) {
    return candidate.start < r.end && r.start < candidate.end;
  });
}

}  // namespace

void validate(const CorruptionSpec& spec, std::size_t dims) {
  if (!(spec.probability >= 0.0 && spec.probability <= 1.0)) {
    throw ParameterError("pi", "must lie in [0,1]");
  }
  if (!(spec.fraction_lo >= 0.0 && spec.fraction_lo <= spec.fraction_hi &&
        spec.fraction_hi <= 1.0)) {
    throw ParameterError("fraction", "need 0 <= lo <= hi <= 1");
  }
  if (!(spec.noise_lo < spec.noise_hi)) throw ParameterError("noise", "need noise_lo < noise_hi");
  if (spec.intervals_min < 1 || spec.intervals_min > spec.intervals_max) {
    throw ParameterError("intervals", "need 1 <= intervals_min <= intervals_max");
  }
  if (spec.square) {
    if (spec.square->rows * spec.square->cols != dims) {
      throw ParameterError("image", "image shape does not match " + std::to_string(dims) +
                                        " attributes");
    }
    const LengthBounds b = square_bounds(spec);
    if (b.lo > b.hi) throw ParameterError("fraction", "no square side fits the area range");
    return;
  }
  const LengthBounds b = interval_bounds(spec, dims);
  if (b.lo > b.hi) {
    throw ParameterError("fraction", "fraction range admits no interval of >= 1 attribute");
  }
  if (spec.intervals_max * b.lo > dims) {
    throw ParameterError("intervals", "intervals cannot fit without overlap");
  }
}

CorruptedData corrupt(const Dataset& data, const CorruptionSpec& spec) {
  const std::size_t dims = data.dims();
  validate(spec, dims);
  std::mt19937_64 rng(spec.seed);
  std::bernoulli_distribution hit(spec.probability);
  std::uniform_real_distribution<double> noise(spec.noise_lo, spec.noise_hi);
  std::uniform_int_distribution<std::size_t> count(spec.intervals_min, spec.intervals_max);

  std::vector<double> values = data.values();
  std::vector<CorruptionMask> masks(data.rows(), CorruptionMask(dims, false));
  for (std::size_t row = 0; row < data.rows(); ++row) {
    if (!hit(rng)) continue;
    CorruptionMask& mask = masks[row];
    if (spec.square) {
      const ImageShape& shape = *spec.square;
      const LengthBounds b = square_bounds(spec);
      const std::size_t side = std::uniform_int_distribution<std::size_t>(b.lo, b.hi)(rng);
      const std::size_t r0 = std::uniform_int_distribution<std::size_t>(0, shape.rows - side)(rng);
      const std::size_t c0 = std::uniform_int_distribution<std::size_t>(0, shape.cols - side)(rng);
      for (std::size_t c = c0; c < c0 + side; ++c) {
        for (std::size_t r = r0; r < r0 + side; ++r) mask[c * shape.rows + r] = true;
      }
    } else {
      const LengthBounds b = interval_bounds(spec, dims);
      std::uniform_int_distribution<std::size_t> length(b.lo, b.hi);
      const std::size_t wanted = count(rng);
      std::vector<AttributeRange> placed;
      for (int attempt = 0; placed.size() < wanted; ++attempt) {
        if (attempt == kMaxPlacementAttempts) {
          throw ParameterError("intervals", "could not place non-overlapping intervals");
        }
        const std::size_t len = length(rng);
        const std::size_t start = std::uniform_int_distribution<std::size_t>(0, dims - len)(rng);
        const AttributeRange candidate{start, start + len};
        if (!overlaps(placed, candidate)) placed.push_back(candidate);
      }
      for (const AttributeRange& r : placed) {
        for (std::size_t a = r.start; a < r.end; ++a) mask[a] = true;
      }
    }
    for (std::size_t a = 0; a < dims; ++a) {
      if (mask[a]) values[row * dims + a] = noise(rng);
    }
  }
  return {data.with_values(std::move(values)), std::move(masks)};
}

Dataset gaussian_cluster(std::size_t rows, const GaussianClusterSpec& spec, std::mt19937_64& rng) {
  if (spec.dims < 1) throw ParameterError("dims", "need at least one attribute");
  if (!(spec.sd > 0.0)) throw ParameterError("sd", "must be positive");
  if (!(std::abs(spec.rho) < 1.0)) throw ParameterError("rho", "must lie in (-1,1)");
  std::normal_distribution<double> z(0.0, 1.0);
  const double innovation = std::sqrt(1.0 - spec.rho * spec.rho);
  std::vector<double> values(rows * spec.dims);
  for (std::size_t i = 0; i < rows; ++i) {
    double state = z(rng);
    for (std::size_t a = 0; a < spec.dims; ++a) {
      if (a > 0) state = spec.rho * state + innovation * z(rng);
      values[i * spec.dims + a] = spec.mean + spec.sd * state;
    }
  }
  return Dataset(rows, spec.dims, std::move(values));
}

Dataset two_gaussians(std::size_t per_class, std::mt19937_64& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> values;
  std::vector<int> labels;
  values.reserve(4 * per_class);
  labels.reserve(2 * per_class);
  for (int cls = 0; cls < 2; ++cls) {
    const double sign = cls == 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < per_class; ++i) {
      values.push_back(sign + z(rng));
      values.push_back(-sign + z(rng));
      labels.push_back(cls);
    }
  }
  return Dataset(2 * per_class, 2, std::move(values), std::move(labels));
}

Dataset uniform_data(std::size_t rows, std::size_t dims, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> values(rows * dims);
  for (double& v : values) v = u(rng);
  return Dataset(rows, dims, std::move(values));
}

std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace corrsep
