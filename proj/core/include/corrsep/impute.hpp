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
#include <map>
#include <optional>
#include <vector>

#include "corrsep/separation.hpp"

namespace corrsep {

enum class ImputeMethod { kMap, kNearestNeighbor };

struct ImputeParams {
  ImputeMethod method = ImputeMethod::kMap;
  // Candidate count on the sibling range. Unset means K of the scored parent
  // node, or ceil(gamma * sqrt(N)) when gamma is set.
  std::optional<std::size_t> neighborhood_size;
  std::optional<double> gamma;
  // Ranked-distance fraction for the neighborhood search; unset reuses the
  // separation alpha.
  std::optional<double> alpha_impute;
  // Reference row treated as absent (leave-one-out evaluation): never a
  // candidate and left out of the parent-range scores.
  std::optional<std::size_t> exclude_row;
};

// Effective candidate count. kNearestNeighbor always yields 1. Throws
// ParameterError("neighborhood_size") when it is 0 or exceeds the usable rows
// and ParameterError("gamma") for a non-positive gamma.
std::size_t resolve_neighborhood_size(const ImputeParams& params, int k,
                                      std::size_t reference_rows);

// Reference rows nearest to the query on the sibling range of `node`, ordered
// by distance with ties broken by row index.
std::vector<std::size_t> sibling_neighborhood(QueryEvaluator& query, std::size_t node,
                                              const ImputeParams& params);

struct NodeImputation {
  std::vector<double> values;  // replacement for the node range
  std::size_t source_row = 0;
};

// Picks, among the sibling neighborhood, the reference row with the highest
// score on the parent range (smallest index on ties) and returns its slice on
// the node range.
NodeImputation map_impute_node(QueryEvaluator& query, std::size_t node,
                               const ImputeParams& params);

struct ImputedInstance {
  std::vector<double> values;
  std::map<std::size_t, std::size_t> source_rows;  // declared node -> reference row
};

// Replaces every declared node range of `result` in the query instance.
ImputedInstance impute(QueryEvaluator& query, const SeparationResult& result,
                       const ImputeParams& params);

}  // namespace corrsep
