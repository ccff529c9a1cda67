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

#include "corrsep/fa_model.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "corrsep/error.hpp"
#include "corrsep/parallel.hpp"

namespace corrsep {
namespace {

constexpr std::size_t kMaxBruteforceDepth = 3;

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

// No-declaration probabilities F(i; +1) and F(i; -1) for a node at depth i.
struct NoDeclaration {
  double anomalous = 1.0;
  double normal = 1.0;
};

}  // namespace

void validate(const FaModelParams& params) {
  if (!in_unit_interval(params.tau)) {
    throw ParameterError("tau", "must lie in [0,1], got " + std::to_string(params.tau));
  }
  if (!in_unit_interval(params.theta)) {
    throw ParameterError("theta", "must lie in [0,1], got " + std::to_string(params.theta));
  }
  for (double t : params.theta_by_depth) {
    if (!in_unit_interval(t)) throw ParameterError("theta", "per-depth values must lie in [0,1]");
  }
  if (params.depth < 1) throw ParameterError("depth", "must be >= 1");
}

double child_conditional(double theta, double tau, Label parent, Label child) {
  if (parent == Label::kUnvisited || child == Label::kUnvisited) {
    throw ParameterError("label", "conditional needs +1/-1 labels");
  }
  const double marginal = child == Label::kAnomalous ? tau : 1.0 - tau;
  return (1.0 - theta) * marginal + (parent == child ? theta : 0.0);
}

double fa_recursion(const FaModelParams& params) {
  validate(params);
  const std::size_t depth = params.depth;
  const double tau = params.tau;
  auto q = [&](std::size_t i, Label parent, Label child) {
    return child_conditional(params.theta_at(i), tau, parent, child);
  };
  constexpr Label kPos = Label::kAnomalous;
  constexpr Label kNeg = Label::kNormal;

  // Leaf parents declare as soon as one child is anomalous.
  const std::size_t lp = depth - 1;
  NoDeclaration f{std::pow(q(lp, kPos, kNeg), 2), std::pow(q(lp, kNeg, kNeg), 2)};
  if (depth == 1) return tau * (1.0 - f.anomalous) + (1.0 - tau) * (1.0 - f.normal);

  for (std::size_t i = depth - 1; i-- > 0;) {
    const double p_nn = q(i, kPos, kNeg);
    const double p_np = q(i, kPos, kPos);
    const double n_nn = q(i, kNeg, kNeg);
    const double n_np = q(i, kNeg, kPos);
    NoDeclaration next;
    next.anomalous = p_nn * p_nn + 2.0 * p_nn * p_np * f.anomalous * f.normal;
    if (i == 0) next.anomalous += p_np * p_np * f.anomalous * f.anomalous;
    next.normal = n_np * n_np * f.anomalous * f.anomalous + n_nn * n_nn * f.normal * f.normal +
                  2.0 * n_np * n_nn * f.anomalous * f.normal;
    f = next;
  }
  // 1 - tau F(0;1) - (1-tau) F(0;-1), summed as declaration probabilities to
  // avoid cancellation at small rates.
  return tau * (1.0 - f.anomalous) + (1.0 - tau) * (1.0 - f.normal);
}

double fa_bruteforce(const FaModelParams& params) {
  validate(params);
  if (params.depth > kMaxBruteforceDepth) {
    throw ParameterError("depth", "exhaustive enumeration supports depth <= " +
                                      std::to_string(kMaxBruteforceDepth));
  }
  // Any dims with nonempty leaves gives the same label-level logic.
  const PartitionTree tree(std::size_t{1} << params.depth, params.depth);
  const std::size_t nodes = tree.node_count();
  const std::uint64_t labelings = std::uint64_t{1} << nodes;

  std::vector<Label> labels(nodes);
  double total = 0.0;
  for (std::uint64_t bits = 0; bits < labelings; ++bits) {
    for (std::size_t n = 0; n < nodes; ++n) {
      labels[n] = (bits >> n) & 1U ? Label::kAnomalous : Label::kNormal;
    }
    double p = labels[0] == Label::kAnomalous ? params.tau : 1.0 - params.tau;
    for (std::size_t n = 1; n < nodes && p > 0.0; ++n) {
      const std::size_t parent = tree.parent(n);
      p *= child_conditional(params.theta_at(tree.node_depth(parent)), params.tau,
                             labels[parent], labels[n]);
    }
    if (p > 0.0 && separate_from_labels(tree, labels).detected) total += p;
  }
  return total;
}

EmpiricalRate fa_empirical(const ScoreModel& model, const Dataset& holdout,
                           std::size_t threads) {
  if (holdout.empty()) throw DataError("false alarm estimate needs a nonempty holdout set");
  std::vector<char> flagged(holdout.rows(), 0);
  parallel_for(
      holdout.rows(),
      [&](std::size_t i) { flagged[i] = tcs_separate(model, holdout.row(i)).detected ? 1 : 0; },
      threads);
  std::size_t hits = 0;
  for (char f : flagged) hits += static_cast<std::size_t>(f);
  const double n = static_cast<double>(holdout.rows());
  const double rate = static_cast<double>(hits) / n;
  return {rate, std::sqrt(rate * (1.0 - rate) / n), holdout.rows()};
}

}  // namespace corrsep
