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

#include "corrsep/distance.hpp"

#include <algorithm>
#include <cmath>

#include "corrsep/error.hpp"

namespace corrsep {

std::size_t ranked_count(std::size_t m, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha", "must lie in (0,1]");
  return static_cast<std::size_t>(std::floor(static_cast<double>(m) * alpha + 1e-12));
}

double squared_euclidean(std::span<const double> x, std::span<const double> y) {
  long double acc = 0.0L;
  for (std::size_t h = 0; h < x.size(); ++h) {
    const long double diff = static_cast<long double>(x[h]) - y[h];
    acc += diff * diff;
  }
  return static_cast<double>(acc);
}

double squared_ranked_distance(std::span<const double> x, std::span<const double> y,
                               std::size_t keep, std::vector<double>& scratch) {
  if (keep >= x.size()) return squared_euclidean(x, y);
  scratch.resize(x.size());
  for (std::size_t h = 0; h < x.size(); ++h) {
    const double diff = x[h] - y[h];
    scratch[h] = diff * diff;
  }
  // Only the sum of the kept deviations matters, so the order among ties is
  // irrelevant and a partial selection suffices.
  std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(keep),
                   scratch.end());
  long double acc = 0.0L;
  for (std::size_t h = 0; h < keep; ++h) acc += scratch[h];
  return static_cast<double>(acc);
}

double ranked_distance(std::span<const double> x, std::span<const double> y, double alpha) {
  if (x.size() != y.size()) {
    throw ParameterError("x", "length mismatch (" + std::to_string(x.size()) + " vs " +
                                  std::to_string(y.size()) + ")");
  }
  const std::size_t keep = ranked_count(x.size(), alpha);
  if (keep == 0) throw ParameterError("alpha", "floor(m * alpha) is 0 for m = " +
                                                  std::to_string(x.size()));
  std::vector<double> scratch;
  return std::sqrt(squared_ranked_distance(x, y, keep, scratch));
}

void squared_deviation_prefix(std::span<const double> x, std::span<const double> y,
                              std::span<double> out) {
  long double acc = 0.0L;
  out[0] = 0.0;
  for (std::size_t h = 0; h < x.size(); ++h) {
    const long double diff = static_cast<long double>(x[h]) - y[h];
    acc += diff * diff;
    out[h + 1] = static_cast<double>(acc);
  }
}

DistanceCache::DistanceCache(const Dataset& reference)
    : rows_(reference.rows()), dims_(reference.dims()) {
  if (reference.empty()) throw DataError("distance cache: empty reference set");
  const std::size_t pairs = rows_ * (rows_ - 1) / 2;
  volumes_.assign(pairs * (dims_ + 1), 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i + 1; j < rows_; ++j) {
      std::span<double> out(volumes_.data() + pair_offset(i, j), dims_ + 1);
      squared_deviation_prefix(reference.row(i), reference.row(j), out);
    }
  }
}

std::size_t DistanceCache::pair_offset(std::size_t i, std::size_t j) const {
  // Row-major strict upper triangle, i < j.
  const std::size_t index = i * rows_ - i * (i + 1) / 2 + (j - i - 1);
  return index * (dims_ + 1);
}

double DistanceCache::volume(std::size_t i, std::size_t j, std::size_t k) const {
  if (i >= rows_ || j >= rows_ || k > dims_) {
    throw ParameterError("index", "distance cache index out of range");
  }
  if (i == j) return 0.0;
  if (i > j) std::swap(i, j);
  return volumes_[pair_offset(i, j) + k];
}

double DistanceCache::interval_distance(std::size_t i, std::size_t j,
                                        AttributeRange range) const {
  validate_range(range, dims_);
  const double diff = volume(i, j, range.end) - volume(i, j, range.start);
  return std::sqrt(std::max(diff, 0.0));
}

DistanceCache build_prefix_cache(const Dataset& reference) { return DistanceCache(reference); }

double interval_distance(const DistanceCache& cache, std::size_t i, std::size_t j,
                         AttributeRange range) {
  return cache.interval_distance(i, j, range);
}

}  // namespace corrsep
