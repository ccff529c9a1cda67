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

#include "corrsep/anomaly_score.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "corrsep/distance.hpp"
#include "corrsep/error.hpp"

namespace corrsep {

void validate(const AnomalyParams& params, std::size_t reference_rows) {
  if (!(params.tau > 0.0 && params.tau < 1.0)) {
    throw ParameterError("tau", "must lie in (0,1), got " + std::to_string(params.tau));
  }
  if (!(params.alpha > 0.0 && params.alpha <= 1.0)) {
    throw ParameterError("alpha", "must lie in (0,1], got " + std::to_string(params.alpha));
  }
  auto check_k = [&](int k) {
    if (k < 1 || static_cast<std::size_t>(k) >= reference_rows) {
      throw ParameterError("k", "K must satisfy 1 <= K < " + std::to_string(reference_rows) +
                                    ", got " + std::to_string(k));
    }
  };
  check_k(params.k_neighbors);
  for (int k : params.k_by_depth) check_k(k);
}

double kth_neighbor_radius(const Dataset& reference, AttributeRange range,
                           std::span<const double> query, int k, double alpha,
                           std::optional<std::size_t> self_row) {
  validate_range(range, reference.dims());
  if (query.size() != range.size()) {
    throw ParameterError("query", "slice length does not match node range");
  }
  const std::size_t usable = reference.rows() - (self_row ? 1 : 0);
  if (k < 1 || static_cast<std::size_t>(k) > usable) {
    throw ParameterError("k", "K=" + std::to_string(k) + " exceeds " + std::to_string(usable) +
                                  " usable reference rows");
  }
  const std::size_t keep = ranked_count(range.size(), alpha);
  if (keep == 0) throw ParameterError("alpha", "floor(|V| * alpha) is 0 on this node");

  std::vector<double> distances;
  distances.reserve(usable);
  std::vector<double> scratch;
  for (std::size_t i = 0; i < reference.rows(); ++i) {
    if (self_row && *self_row == i) continue;
    distances.push_back(squared_ranked_distance(query, reference.slice(i, range), keep, scratch));
  }
  auto kth = distances.begin() + (k - 1);
  std::nth_element(distances.begin(), kth, distances.end());
  return std::sqrt(*kth);
}

NodeScoreContext build_node_context(const Dataset& reference, AttributeRange range, int k,
                                    double alpha) {
  NodeScoreContext context{range, k, alpha, {}, {}};
  context.radii.resize(reference.rows());
  for (std::size_t i = 0; i < reference.rows(); ++i) {
    context.radii[i] = kth_neighbor_radius(reference, range, reference.slice(i, range), k, alpha, i);
  }
  context.sorted_radii = context.radii;
  std::sort(context.sorted_radii.begin(), context.sorted_radii.end());
  return context;
}

double score_from_radius(const NodeScoreContext& context, double radius) {
  const auto& sorted = context.sorted_radii;
  const auto first = std::lower_bound(sorted.begin(), sorted.end(), radius);
  const auto count = static_cast<double>(sorted.end() - first);
  return count / static_cast<double>(sorted.size());
}

double score(const NodeScoreContext& context, const Dataset& reference,
             std::span<const double> query) {
  if (context.radii.size() != reference.rows() || context.node.end > reference.dims() ||
      query.size() != context.node.size()) {
    throw ParameterError("context", "score context does not match reference/query");
  }
  const double radius =
      kth_neighbor_radius(reference, context.node, query, context.k, context.alpha);
  return score_from_radius(context, radius);
}

Label is_anomalous(double p_hat, double tau) {
  return p_hat <= tau ? Label::kAnomalous : Label::kNormal;
}

}  // namespace corrsep
