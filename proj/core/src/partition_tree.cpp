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

#include "corrsep/partition_tree.hpp"

#include <algorithm>
#include <bit>

#include "corrsep/error.hpp"

namespace corrsep {

PartitionTree::PartitionTree(std::size_t dims, std::size_t depth) : dims_(dims), depth_(depth) {
  if (dims < 2) throw ParameterError("dims", "need at least 2 attributes");
  if (depth < 1) throw ParameterError("depth", "depth must be >= 1");
  if (depth >= 8 * sizeof(std::size_t) - 1) throw ParameterError("depth", "depth too large");
  const std::size_t count = (std::size_t{1} << (depth + 1)) - 1;
  ranges_.resize(count);
  ranges_[kRoot] = {0, dims};
  for (std::size_t node = 0; left(node) < count; ++node) {
    const AttributeRange r = ranges_[node];
    const std::size_t mid = r.start + r.size() / 2;
    if (mid == r.start) {
      throw ParameterError("depth", "depth " + std::to_string(depth) + " leaves empty nodes for " +
                                        std::to_string(dims) + " attributes");
    }
    ranges_[left(node)] = {r.start, mid};
    ranges_[right(node)] = {mid, r.end};
  }
}

std::size_t PartitionTree::node_depth(std::size_t node) const {
  return static_cast<std::size_t>(std::bit_width(node + 1)) - 1;
}

std::string PartitionTree::path(std::size_t node) const {
  std::string out;
  while (node != kRoot) {
    out.push_back(node % 2 == 1 ? 'L' : 'R');
    node = parent(node);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::optional<std::size_t> PartitionTree::node_from_path(std::string_view path) const {
  std::size_t node = kRoot;
  for (char step : path) {
    if (step == 'L') {
      node = left(node);
    } else if (step == 'R') {
      node = right(node);
    } else {
      return std::nullopt;
    }
    if (node >= ranges_.size()) return std::nullopt;
  }
  return node;
}

PartitionTree build_partition(std::size_t dims, std::size_t depth) {
  return PartitionTree(dims, depth);
}

}  // namespace corrsep
