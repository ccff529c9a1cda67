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

namespace corrsep {

// Anomaly decision at a tree node. kUnvisited marks nodes the lazy traversal
// never labeled.
enum class Label : std::int8_t { kNormal = -1, kUnvisited = 0, kAnomalous = 1 };

struct AnomalyParams {
  int k_neighbors = 8;   // K of the kNN score
  double tau = 0.016;    // per-node false alarm rate
  double alpha = 0.75;   // ranked-distance fraction
  // Optional per-depth override of k_neighbors; entry i applies at depth i.
  std::vector<int> k_by_depth;

  int k_at_depth(std::size_t depth) const {
    return depth < k_by_depth.size() ? k_by_depth[depth] : k_neighbors;
  }
};

// Checks tau in (0,1), alpha in (0,1] and 1 <= K < reference_rows (for every
// per-depth override too). Throws ParameterError naming the key.
void validate(const AnomalyParams& params, std::size_t reference_rows);

// Reference statistics of one node: the K-th neighbor radius of every
// reference row (its own row excluded, i.e. the K+1-th neighbor rule) and the
// same radii sorted ascending for binary-search scoring.
struct NodeScoreContext {
  AttributeRange node;
  int k = 0;
  double alpha = 1.0;
  std::vector<double> radii;
  std::vector<double> sorted_radii;
};

// K-th smallest ranked distance from `query` (a slice over `range`) to the
// reference rows restricted to `range`. When `self_row` is given that row is
// skipped, which implements the K+1-th neighbor rule for members of the
// reference set. Throws ParameterError("k") unless 1 <= K <= usable rows.
double kth_neighbor_radius(const Dataset& reference, AttributeRange range,
                           std::span<const double> query, int k, double alpha,
                           std::optional<std::size_t> self_row = std::nullopt);

// Direct O(N^2 |V|) construction of a node context. ScoreModel builds all
// nodes at once with shared prefix volumes; this is the reference path.
NodeScoreContext build_node_context(const Dataset& reference, AttributeRange range, int k,
                                    double alpha);

// Fraction of reference rows whose radius is >= `radius`. Always a multiple
// of 1/N.
double score_from_radius(const NodeScoreContext& context, double radius);

// kNN score of an external query slice (K-th rule, no self exclusion).
double score(const NodeScoreContext& context, const Dataset& reference,
             std::span<const double> query);

// +1 iff p_hat <= tau.
Label is_anomalous(double p_hat, double tau);

}  // namespace corrsep
