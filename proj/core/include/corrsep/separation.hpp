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

// Tree-based corruption separation.
//
// A test instance is labeled node by node on a binary attribute-partitioning
// tree, each node being a kNN anomaly test of the instance slice against the
// reference slice. Label triples (parent, left, right) drive the search:
//
//   (+1,+1,+1)  corruption: declare the node's attributes, prune the branch.
//               At the root the pattern is disregarded and the search
//               continues as if it were inconclusive.
//   (+1,-1,-1)  termination: an anomalous combination of normal parts is not
//               a corruption; prune without declaring.
//   otherwise   explore both children. At a parent of leaves, any anomalous
//               leaf is accepted as corrupted instead.
//
// The same decision routine drives the data-free enumeration in fa_model, so
// analytic false-alarm rates and the real traversal cannot drift apart.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "corrsep/anomaly_score.hpp"
#include "corrsep/dataset.hpp"
#include "corrsep/partition_tree.hpp"

namespace corrsep {

enum class Pattern { kCorruption, kTermination, kExploreBoth, kClean };

// Pattern of a labeled parent/children triple. Mixed children map to
// kExploreBoth whichever side is anomalous; a normal parent with normal
// children is kClean. Throws ParameterError("label") on unvisited labels.
Pattern classify_pattern(Label parent, Label left, Label right);

enum class StepAction {
  kDeclareNode,               // declare the node's range corrupted and stop
  kStop,                      // stop this branch, nothing declared
  kDeclareAnomalousChildren,  // parent of leaves: accept anomalous leaves
  kRecurse,                   // visit both children
};

StepAction decide_step(bool is_root, bool is_leaf_parent, Pattern pattern);

// Per-node reference statistics for a fixed reference set, tree and K/alpha.
// Building costs O(N^2 (d + nodes)) time; queries are then O(N) per node.
class ScoreModel {
 public:
  // Throws ParameterError when params are invalid for the reference size or
  // some node has floor(|V| * alpha) == 0, and DataError on a dimensionality
  // mismatch. threads = 0 uses default_thread_count().
  ScoreModel(Dataset reference, PartitionTree tree, AnomalyParams params,
             std::size_t threads = 0);

  const Dataset& reference() const { return reference_; }
  const PartitionTree& tree() const { return tree_; }
  const AnomalyParams& params() const { return params_; }
  const NodeScoreContext& context(std::size_t node) const { return contexts_.at(node); }

  // Score of reference row i on `node` under the K+1-th neighbor rule.
  double reference_score(std::size_t node, std::size_t row) const;

  // Same score with reference row `excluded` treated as absent: neighbor
  // radii that involved it fall back to the next neighbor and the score is
  // normalized by N - 1. Requires K + 1 < N on the node.
  double reference_score_without(std::size_t node, std::size_t row, std::size_t excluded) const;

 private:
  // K+1 nearest other rows of every reference row, ordered by distance then
  // index, plus the inverse relation restricted to the first K entries.
  struct NeighborLists {
    std::vector<std::size_t> nearest;       // rows x (K+1)
    std::vector<double> nearest_distance;   // rows x (K+1), not squared
    std::vector<std::vector<std::size_t>> within_k_of;
  };

  double radius_without(std::size_t node, std::size_t row, std::size_t excluded) const;

  Dataset reference_;
  PartitionTree tree_;
  AnomalyParams params_;
  std::vector<NodeScoreContext> contexts_;
  std::vector<NeighborLists> neighbors_;
};

// Lazily evaluated distances, radii and scores of one test instance against a
// ScoreModel. Every node distance vector is computed at most once; the count
// of such computations is exposed for cost accounting.
class QueryEvaluator {
 public:
  QueryEvaluator(const ScoreModel& model, std::span<const double> instance);

  const ScoreModel& model() const { return *model_; }
  std::span<const double> instance() const { return instance_; }

  // Squared ranked distances (model alpha) from the instance to every
  // reference row over the node range.
  std::span<const double> squared_distances(std::size_t node);
  // Same with a different alpha; equal alpha reuses the memoized vector.
  std::span<const double> squared_distances(std::size_t node, double alpha);

  double radius(std::size_t node);
  double score(std::size_t node);
  Label label(std::size_t node, double tau) { return is_anomalous(score(node), tau); }

  std::size_t kernel_invocations() const { return kernel_invocations_; }

 private:
  std::vector<double> compute_distances(std::size_t node, double alpha);

  const ScoreModel* model_;
  std::vector<double> instance_;
  std::vector<double> prefix_;  // N x (d+1) squared-deviation volumes, alpha = 1 only
  std::vector<std::vector<double>> distances_;
  std::map<std::pair<std::size_t, double>, std::vector<double>> alternate_distances_;
  std::vector<std::optional<double>> radii_;
  std::size_t kernel_invocations_ = 0;
};

struct SeparationResult {
  bool detected = false;
  std::vector<std::size_t> declared_nodes;  // in traversal order
  std::vector<std::size_t> corrupted;       // sorted attribute indices
  std::vector<Label> labels;                // one per tree node slot
};

namespace detail {

template <typename LabelFn>
class SeparationRun {
 public:
  SeparationRun(const PartitionTree& tree, LabelFn& label_of)
      : tree_(tree), label_of_(label_of) {}

  SeparationResult run() {
    result_.labels.assign(tree_.node_count(), Label::kUnvisited);
    label(PartitionTree::kRoot);
    visit(PartitionTree::kRoot);
    std::vector<bool> mask(tree_.dims(), false);
    for (std::size_t node : result_.declared_nodes) {
      const AttributeRange r = tree_.range(node);
      for (std::size_t a = r.start; a < r.end; ++a) mask[a] = true;
    }
    for (std::size_t a = 0; a < mask.size(); ++a) {
      if (mask[a]) result_.corrupted.push_back(a);
    }
    result_.detected = !result_.corrupted.empty();
    return std::move(result_);
  }

 private:
  Label label(std::size_t node) {
    Label& slot = result_.labels[node];
    if (slot == Label::kUnvisited) slot = label_of_(node);
    return slot;
  }

  void visit(std::size_t node) {
    const std::size_t l = tree_.left(node);
    const std::size_t r = tree_.right(node);
    const Label ul = label(l);
    const Label ur = label(r);
    const Pattern pattern = classify_pattern(result_.labels[node], ul, ur);
    switch (decide_step(tree_.is_root(node), tree_.is_leaf_parent(node), pattern)) {
      case StepAction::kDeclareNode:
        result_.declared_nodes.push_back(node);
        return;
      case StepAction::kStop:
        return;
      case StepAction::kDeclareAnomalousChildren:
        if (ul == Label::kAnomalous) result_.declared_nodes.push_back(l);
        if (ur == Label::kAnomalous) result_.declared_nodes.push_back(r);
        return;
      case StepAction::kRecurse:
        visit(l);
        visit(r);
        return;
    }
  }

  const PartitionTree& tree_;
  LabelFn& label_of_;
  SeparationResult result_;
};

}  // namespace detail

// Runs the separation logic with labels supplied on demand by
// label_of(node) -> Label. Only nodes the traversal reaches are requested.
template <typename LabelFn>
SeparationResult separate_with_labels(const PartitionTree& tree, LabelFn&& label_of) {
  detail::SeparationRun<std::remove_reference_t<LabelFn>> run(tree, label_of);
  return run.run();
}

// Data-free separation from a complete label vector (one entry per node).
SeparationResult separate_from_labels(const PartitionTree& tree, std::span<const Label> labels);

SeparationResult tcs_separate(QueryEvaluator& query, double tau);
SeparationResult tcs_separate(const ScoreModel& model, std::span<const double> instance);

// Per-attribute corrupted indicator.
std::vector<bool> localization_mask(const SeparationResult& result, std::size_t dims);

}  // namespace corrsep
