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
#include <span>
#include <vector>

#include "corrsep/dataset.hpp"

namespace corrsep {

// Number of deviations kept by the ranked distance over m attributes:
// floor(m * alpha). A 1e-12 slack absorbs representation error in alpha
// (0.3 * 10 must keep 3 attributes, not 2).
std::size_t ranked_count(std::size_t m, double alpha);

// Ranked Euclidean distance: square root of the sum of the floor(m * alpha)
// smallest squared attribute deviations between x and y. alpha = 1 is the
// Euclidean distance. For alpha < 1 this is not a metric: a zero distance
// does not imply x == y.
//
// Throws ParameterError on length mismatch, alpha outside (0,1], or when
// floor(m * alpha) == 0.
double ranked_distance(std::span<const double> x, std::span<const double> y, double alpha);

// Squared ranked distance keeping the `keep` smallest squared deviations.
// `scratch` is reused between calls to avoid allocation in hot loops.
double squared_ranked_distance(std::span<const double> x, std::span<const double> y,
                               std::size_t keep, std::vector<double>& scratch);

double squared_euclidean(std::span<const double> x, std::span<const double> y);

// Writes the prefix volumes V(k) = sum_{h<k} (x_h - y_h)^2 for k = 0..m into
// out (size m + 1). V(0) = 0 and V is nondecreasing.
void squared_deviation_prefix(std::span<const double> x, std::span<const double> y,
                              std::span<double> out);

// Integral-image cache of pairwise squared deviations over a reference set:
// volume(i, j, k) = sum over the first k attributes of (s_i - s_j)^2. Any
// attribute interval distance is then one subtraction and a square root.
//
// Storage is the strict upper triangle, O(N^2 (d+1)) doubles. Intended for
// reference sets where that fits in memory; ScoreModel streams the same
// volumes row by row instead of retaining them.
class DistanceCache {
 public:
  DistanceCache() = default;
  explicit DistanceCache(const Dataset& reference);

  std::size_t rows() const { return rows_; }
  std::size_t dims() const { return dims_; }

  double volume(std::size_t i, std::size_t j, std::size_t k) const;
  double interval_distance(std::size_t i, std::size_t j, AttributeRange range) const;

 private:
  std::size_t pair_offset(std::size_t i, std::size_t j) const;

  std::size_t rows_ = 0;
  std::size_t dims_ = 0;
  std::vector<double> volumes_;
};

DistanceCache build_prefix_cache(const Dataset& reference);

// Euclidean distance between reference rows i and j restricted to `range`.
double interval_distance(const DistanceCache& cache, std::size_t i, std::size_t j,
                         AttributeRange range);

}  // namespace corrsep
