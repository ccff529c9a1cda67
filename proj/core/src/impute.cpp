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

#include "corrsep/impute.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "corrsep/error.hpp"

namespace corrsep {

std::size_t resolve_neighborhood_size(const ImputeParams& params, int k,
                                      std::size_t reference_rows) {
  const std::size_t usable = reference_rows - (params.exclude_row ? 1 : 0);
  if (params.method == ImputeMethod::kNearestNeighbor) {
    if (usable == 0) throw ParameterError("neighborhood_size", "no usable reference rows");
    return 1;
  }
  std::size_t size = static_cast<std::size_t>(std::max(k, 0));
  if (params.neighborhood_size) {
    size = *params.neighborhood_size;
  } else if (params.gamma) {
    if (!(*params.gamma > 0.0)) throw ParameterError("gamma", "must be positive");
    size = static_cast<std::size_t>(
        std::ceil(*params.gamma * std::sqrt(static_cast<double>(reference_rows))));
  }
  if (size == 0 || size > usable) {
    throw ParameterError("neighborhood_size", "must lie in [1, " + std::to_string(usable) +
                                                  "], got " + std::to_string(size));
  }
  return size;
}

std::vector<std::size_t> sibling_neighborhood(QueryEvaluator& query, std::size_t node,
                                              const ImputeParams& params) {
  const ScoreModel& model = query.model();
  const PartitionTree& tree = model.tree();
  if (node >= tree.node_count() || tree.is_root(node)) {
    throw ParameterError("node", "imputation needs a non-root node");
  }
  const std::size_t parent = tree.parent(node);
  const std::size_t size =
      resolve_neighborhood_size(params, model.context(parent).k, model.reference().rows());
  const double alpha = params.alpha_impute.value_or(model.params().alpha);
  const auto distances = query.squared_distances(tree.sibling(node), alpha);

  std::vector<std::size_t> rows(distances.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  if (params.exclude_row) {
    rows.erase(std::remove(rows.begin(), rows.end(), *params.exclude_row), rows.end());
  }
  auto closer = [&](std::size_t a, std::size_t b) {
    return distances[a] != distances[b] ? distances[a] < distances[b] : a < b;
  };
  std::partial_sort(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(size), rows.end(),
                    closer);
  rows.resize(size);
  return rows;
}

NodeImputation map_impute_node(QueryEvaluator& query, std::size_t node,
                               const ImputeParams& params) {
  const ScoreModel& model = query.model();
  const std::vector<std::size_t> candidates = sibling_neighborhood(query, node, params);
  const std::size_t parent = model.tree().parent(node);

  auto parent_score = [&](std::size_t row) {
    return params.exclude_row ? model.reference_score_without(parent, row, *params.exclude_row)
                              : model.reference_score(parent, row);
  };
  std::size_t best = candidates.front();
  double best_score = parent_score(best);
  for (std::size_t row : candidates) {
    const double s = parent_score(row);
    if (s > best_score || (s == best_score && row < best)) {
      best = row;
      best_score = s;
    }
  }
  const auto slice = model.reference().slice(best, model.tree().range(node));
  return {{slice.begin(), slice.end()}, best};
}

ImputedInstance impute(QueryEvaluator& query, const SeparationResult& result,
                       const ImputeParams& params) {
  ImputedInstance out;
  out.values.assign(query.instance().begin(), query.instance().end());
  for (std::size_t node : result.declared_nodes) {
    NodeImputation fill = map_impute_node(query, node, params);
    const AttributeRange range = query.model().tree().range(node);
    std::copy(fill.values.begin(), fill.values.end(),
              out.values.begin() + static_cast<std::ptrdiff_t>(range.start));
    out.source_rows[node] = fill.source_row;
  }
  return out;
}

}  // namespace corrsep
