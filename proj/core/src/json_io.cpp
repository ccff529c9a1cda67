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

#include "corrsep/json_io.hpp"

#include "corrsep/error.hpp"

namespace corrsep {
namespace {

nlohmann::json optional_rate(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json separation_to_json(const SeparationResult& result, const PartitionTree& tree) {
  nlohmann::json labels = nlohmann::json::object();
  for (std::size_t node = 0; node < result.labels.size(); ++node) {
    if (result.labels[node] != Label::kUnvisited) {
      labels[tree.path(node)] = static_cast<int>(result.labels[node]);
    }
  }
  return {{"detected", result.detected},
          {"corrupted_attributes", result.corrupted},
          {"node_labels", std::move(labels)}};
}

nlohmann::json audit_to_json(std::size_t row, const ImputedInstance& imputed,
                             const PartitionTree& tree) {
  nlohmann::json sources = nlohmann::json::object();
  for (const auto& [node, source] : imputed.source_rows) sources[tree.path(node)] = source;
  return {{"row", row}, {"source_rows", std::move(sources)}};
}

nlohmann::json scaling_to_json(const ScalingParams& params) {
  return {{"min", params.min}, {"max", params.max}};
}

ScalingParams scaling_from_json(const nlohmann::json& doc) {
  try {
    ScalingParams p{doc.at("min").get<std::vector<double>>(),
                    doc.at("max").get<std::vector<double>>()};
    if (p.min.size() != p.max.size()) throw DataError("scaling min/max lengths differ");
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed scaling document: ") + e.what());
  }
}

nlohmann::json roc_point_to_json(const RocPoint& point) {
  return {{"tau", point.tau},
          {"detection_fa", optional_rate(point.detection_fa)},
          {"detection_tp", optional_rate(point.detection_tp)},
          {"localization_fa", optional_rate(point.localization_fa)},
          {"localization_tp", optional_rate(point.localization_tp)}};
}

}  // namespace corrsep
