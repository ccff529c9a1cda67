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
#include <nlohmann/json.hpp>

#include "corrsep/dataset.hpp"
#include "corrsep/evaluate.hpp"
#include "corrsep/impute.hpp"
#include "corrsep/separation.hpp"

namespace corrsep {

// {"detected": bool, "corrupted_attributes": [int], "node_labels": {path: +1/-1}}
// with only visited nodes listed; the root path is "".
nlohmann::json separation_to_json(const SeparationResult& result, const PartitionTree& tree);

// {"row": i, "source_rows": {path: reference row}}
nlohmann::json audit_to_json(std::size_t row, const ImputedInstance& imputed,
                             const PartitionTree& tree);

nlohmann::json scaling_to_json(const ScalingParams& params);
// Throws DataError on a malformed document.
ScalingParams scaling_from_json(const nlohmann::json& doc);

// Absent rates become null.
nlohmann::json roc_point_to_json(const RocPoint& point);

}  // namespace corrsep
