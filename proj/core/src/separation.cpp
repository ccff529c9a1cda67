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

#include "corrsep/separation.hpp"

#include <algorithm>
#include <cmath>

#include "corrsep/distance.hpp"
#include "corrsep/error.hpp"
#include "corrsep/parallel.hpp"

namespace corrsep {

Pattern classify_pattern(Label parent, Label left, Label right) {
  if (parent == Label::kUnvisited || left == Label::kUnvisited || right == Label::kUnvisited) {
    throw ParameterError("label", "pattern requires labeled parent and children");
  }
  const bool l = left == Label::kAnomalous;
  const bool r = right == Label::kAnomalous;
  if (parent == Label::kAnomalous) {
    if (l && r) return Pattern::kCorruption;
    if (!l && !r) return Pattern::kTermination;
    return Pattern::kExploreBoth;
  }
  return (l || r) ? Pattern::kExploreBoth : Pattern::kClean;
}

StepAction decide_step(bool is_root, bool is_leaf_parent, Pattern pattern) {
  if (pattern == Pattern::kCorruption && !is_root) return StepAction::kDeclareNode;
  if (pattern == Pattern::kTermination) return StepAction::kStop;
  if (is_leaf_parent) return StepAction::kDeclareAnomalousChildren;
  return StepAction::kRecurse;
}

ScoreModel::ScoreModel(Dataset reference, PartitionTree tree, AnomalyParams params,
                       std::size_t threads)
    : reference_(std::move(reference)), tree_(std::move(tree)), params_(std::move(params)) {
  if (tree_.dims() != reference_.dims()) {
    throw DataError("score model: tree covers " + std::to_string(tree_.dims()) +
                    " attributes, reference has " + std::to_string(reference_.dims()));
  }
  validate(params_, reference_.rows());

  const std::size_t n = reference_.rows();
  const std::size_t d = reference_.dims();
  const std::size_t nodes = tree_.node_count();
  const bool euclidean = params_.alpha == 1.0;

  std::vector<std::size_t> keep(nodes);
  std::vector<std::size_t> width(nodes);
  contexts_.resize(nodes);
  neighbors_.resize(nodes);
  for (std::size_t node = 0; node < nodes; ++node) {
    const AttributeRange range = tree_.range(node);
    keep[node] = ranked_count(range.size(), params_.alpha);
    if (keep[node] == 0) {
      throw ParameterError("alpha", "floor(|V| * alpha) is 0 on node '" + tree_.path(node) +
                                        "' with " + std::to_string(range.size()) + " attributes");
    }
    auto& ctx = contexts_[node];
    ctx.node = range;
    ctx.k = params_.k_at_depth(tree_.node_depth(node));
    ctx.alpha = params_.alpha;
    ctx.radii.assign(n, 0.0);
    width[node] = std::min<std::size_t>(static_cast<std::size_t>(ctx.k) + 1, n - 1);
    neighbors_[node].nearest.resize(n * width[node]);
    neighbors_[node].nearest_distance.resize(n * width[node]);
  }

  parallel_for(
      n,
      [&](std::size_t i) {
        std::vector<double> dist(nodes * n);
        std::vector<double> prefix(d + 1);
        std::vector<double> scratch;
        std::vector<std::size_t> order;
        const auto row_i = reference_.row(i);
        for (std::size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          if (euclidean) {
            squared_deviation_prefix(row_i, reference_.row(j), prefix);
            for (std::size_t node = 0; node < nodes; ++node) {
              const AttributeRange r = contexts_[node].node;
              dist[node * n + j] = std::max(prefix[r.end] - prefix[r.start], 0.0);
            }
          } else {
            for (std::size_t node = 0; node < nodes; ++node) {
              const AttributeRange r = contexts_[node].node;
              dist[node * n + j] = squared_ranked_distance(reference_.slice(i, r),
                                                           reference_.slice(j, r), keep[node],
                                                           scratch);
            }
          }
        }
        for (std::size_t node = 0; node < nodes; ++node) {
          const double* row_dist = dist.data() + node * n;
          order.clear();
          for (std::size_t j = 0; j < n; ++j) {
            if (j != i) order.push_back(j);
          }
          const std::size_t w = width[node];
          std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(w),
                            order.end(), [&](std::size_t a, std::size_t b) {
                              return row_dist[a] != row_dist[b] ? row_dist[a] < row_dist[b]
                                                                : a < b;
                            });
          auto& lists = neighbors_[node];
          for (std::size_t t = 0; t < w; ++t) {
            lists.nearest[i * w + t] = order[t];
            lists.nearest_distance[i * w + t] = std::sqrt(row_dist[order[t]]);
          }
          contexts_[node].radii[i] =
              lists.nearest_distance[i * w + static_cast<std::size_t>(contexts_[node].k) - 1];
        }
      },
      threads);

  for (std::size_t node = 0; node < nodes; ++node) {
    auto& ctx = contexts_[node];
    ctx.sorted_radii = ctx.radii;
    std::sort(ctx.sorted_radii.begin(), ctx.sorted_radii.end());
    auto& lists = neighbors_[node];
    lists.within_k_of.assign(n, {});
    const std::size_t w = width[node];
    for (std::size_t row = 0; row < n; ++row) {
      for (std::size_t t = 0; t < static_cast<std::size_t>(ctx.k); ++t) {
        lists.within_k_of[lists.nearest[row * w + t]].push_back(row);
      }
    }
  }
}

double ScoreModel::radius_without(std::size_t node, std::size_t row, std::size_t excluded) const {
  const auto& lists = neighbors_[node];
  const std::size_t k = static_cast<std::size_t>(contexts_[node].k);
  const std::size_t w = lists.nearest.size() / reference_.rows();
  const std::size_t* first = lists.nearest.data() + row * w;
  const bool displaced = std::find(first, first + k, excluded) != first + k;
  return lists.nearest_distance[row * w + (displaced ? k : k - 1)];
}

double ScoreModel::reference_score_without(std::size_t node, std::size_t row,
                                           std::size_t excluded) const {
  const auto& ctx = contexts_.at(node);
  const std::size_t n = reference_.rows();
  if (row >= n || excluded >= n || row == excluded) {
    throw ParameterError("row", "need distinct in-range rows");
  }
  if (static_cast<std::size_t>(ctx.k) + 1 >= n) {
    throw ParameterError("k", "leave-one-out scoring needs K + 1 < N");
  }
  const double r = radius_without(node, row, excluded);
  const auto& sorted = ctx.sorted_radii;
  auto count = static_cast<std::ptrdiff_t>(sorted.end() -
                                           std::lower_bound(sorted.begin(), sorted.end(), r));
  if (ctx.radii[excluded] >= r) --count;
  for (std::size_t other : neighbors_[node].within_k_of[excluded]) {
    count += static_cast<std::ptrdiff_t>(radius_without(node, other, excluded) >= r) -
             static_cast<std::ptrdiff_t>(ctx.radii[other] >= r);
  }
  return static_cast<double>(count) / static_cast<double>(n - 1);
}

double ScoreModel::reference_score(std::size_t node, std::size_t row) const {
  const auto& ctx = contexts_.at(node);
  return score_from_radius(ctx, ctx.radii.at(row));
}

QueryEvaluator::QueryEvaluator(const ScoreModel& model, std::span<const double> instance)
    : model_(&model),
      instance_(instance.begin(), instance.end()),
      distances_(model.tree().node_count()),
      radii_(model.tree().node_count()) {
  if (instance.size() != model.reference().dims()) {
    throw DataError("query has " + std::to_string(instance.size()) + " attributes, expected " +
                    std::to_string(model.reference().dims()));
  }
  for (double v : instance_) {
    if (!std::isfinite(v)) throw DataError("query contains a non-finite value");
  }
}

std::vector<double> QueryEvaluator::compute_distances(std::size_t node, double alpha) {
  ++kernel_invocations_;
  const Dataset& ref = model_->reference();
  const std::size_t n = ref.rows();
  const std::size_t d = ref.dims();
  const AttributeRange range = model_->tree().range(node);
  std::vector<double> out(n);
  if (alpha == 1.0) {
    if (prefix_.empty()) {
      prefix_.resize(n * (d + 1));
      for (std::size_t j = 0; j < n; ++j) {
        squared_deviation_prefix(instance_, ref.row(j),
                                 std::span<double>(prefix_.data() + j * (d + 1), d + 1));
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double* p = prefix_.data() + j * (d + 1);
      out[j] = std::max(p[range.end] - p[range.start], 0.0);
    }
    return out;
  }
  const std::size_t keep = ranked_count(range.size(), alpha);
  if (keep == 0) throw ParameterError("alpha", "floor(|V| * alpha) is 0 on this node");
  const std::span<const double> q(instance_.data() + range.start, range.size());
  std::vector<double> scratch;
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = squared_ranked_distance(q, ref.slice(j, range), keep, scratch);
  }
  return out;
}

std::span<const double> QueryEvaluator::squared_distances(std::size_t node) {
  auto& slot = distances_.at(node);
  if (slot.empty()) slot = compute_distances(node, model_->params().alpha);
  return slot;
}

std::span<const double> QueryEvaluator::squared_distances(std::size_t node, double alpha) {
  if (alpha == model_->params().alpha) return squared_distances(node);
  auto [it, inserted] = alternate_distances_.try_emplace({node, alpha});
  if (inserted) it->second = compute_distances(node, alpha);
  return it->second;
}

double QueryEvaluator::radius(std::size_t node) {
  auto& slot = radii_.at(node);
  if (!slot) {
    const auto distances = squared_distances(node);
    std::vector<double> work(distances.begin(), distances.end());
    const int k = model_->context(node).k;
    auto kth = work.begin() + (k - 1);
    std::nth_element(work.begin(), kth, work.end());
    slot = std::sqrt(*kth);
  }
  return *slot;
}

double QueryEvaluator::score(std::size_t node) {
  return score_from_radius(model_->context(node), radius(node));
}

SeparationResult separate_from_labels(const PartitionTree& tree, std::span<const Label> labels) {
  if (labels.size() != tree.node_count()) {
    throw ParameterError("labels", "label vector must have one entry per tree node");
  }
  return separate_with_labels(tree, [&](std::size_t node) { return labels[node]; });
}

SeparationResult tcs_separate(QueryEvaluator& query, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("tau", "must lie in (0,1)");
  return separate_with_labels(query.model().tree(),
                              [&](std::size_t node) { return query.label(node, tau); });
}

SeparationResult tcs_separate(const ScoreModel& model, std::span<const double> instance) {
  QueryEvaluator query(model, instance);
  return tcs_separate(query, model.params().tau);
}

std::vector<bool> localization_mask(const SeparationResult& result, std::size_t dims) {
  std::vector<bool> mask(dims, false);
  for (std::size_t a : result.corrupted) {
    if (a >= dims) throw ParameterError("dims", "corrupted attribute outside dimensionality");
    mask[a] = true;
  }
  return mask;
}

}  // namespace corrsep
