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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corrsep/dataset.hpp"

namespace corrsep {

// Complete depth-L binary tree over attribute ranges with half-way splits:
// a node covering n attributes gives its left child the first floor(n/2).
// Nodes use heap numbering: root 0, children of n are 2n+1 and 2n+2, so the
// tree has 2^(L+1) - 1 slots and nodes of depth i occupy [2^i - 1, 2^(i+1) - 1).
class PartitionTree {
 public:
  static constexpr std::size_t kRoot = 0;

  PartitionTree() = default;
  // Throws ParameterError("dims") for dims < 2 and ParameterError("depth")
  // when depth < 1 or some leaf would be empty.
  PartitionTree(std::size_t dims, std::size_t depth);

  std::size_t dims() const { return dims_; }
  std::size_t depth() const { return depth_; }
  std::size_t node_count() const { return ranges_.size(); }

  AttributeRange range(std::size_t node) const { return ranges_.at(node); }
  std::size_t node_depth(std::size_t node) const;

  bool is_root(std::size_t node) const { return node == kRoot; }
  bool is_leaf(std::size_t node) const { return node_depth(node) == depth_; }
  bool is_leaf_parent(std::size_t node) const { return node_depth(node) + 1 == depth_; }

  std::size_t left(std::size_t node) const { return 2 * node + 1; }
  std::size_t right(std::size_t node) const { return 2 * node + 2; }
  std::size_t parent(std::size_t node) const { return (node - 1) / 2; }
  std::size_t sibling(std::size_t node) const { return node % 2 == 1 ? node + 1 : node - 1; }

  // Root-relative L/R path; the root is the empty string.
  std::string path(std::size_t node) const;
  std::optional<std::size_t> node_from_path(std::string_view path) const;

 private:
  std::size_t dims_ = 0;
  std::size_t depth_ = 0;
  std::vector<AttributeRange> ranges_;
};

PartitionTree build_partition(std::size_t dims, std::size_t depth);

}  // namespace corrsep
