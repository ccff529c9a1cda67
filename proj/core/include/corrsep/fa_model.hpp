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

// Whole-tree false alarm rate of the separation algorithm under a tree label
// model: the root is anomalous with probability tau and every child label is
// drawn given its parent as
//
//   p(child | parent) = (1 - theta) p(child) + theta [child == parent],
//
// with marginal p(+1) = tau. theta = 0 makes node labels independent and
// theta = 1 copies the root label down the whole tree.

#pragma once

#include <cstddef>
#include <vector>

#include "corrsep/anomaly_score.hpp"
#include "corrsep/dataset.hpp"
#include "corrsep/separation.hpp"

namespace corrsep {

struct FaModelParams {
  double tau = 0.05;
  double theta = 0.75;
  std::size_t depth = 6;
  // Optional per-depth dependency; entry i couples depth-i parents to their
  // children and overrides theta there.
  std::vector<double> theta_by_depth;

  double theta_at(std::size_t parent_depth) const {
    return parent_depth < theta_by_depth.size() ? theta_by_depth[parent_depth] : theta;
  }
};

// tau and every theta in [0,1], depth >= 1. Throws ParameterError.
void validate(const FaModelParams& params);

double child_conditional(double theta, double tau, Label parent, Label child);

// Closed-form rate via the bottom-up no-declaration probabilities.
double fa_recursion(const FaModelParams& params);

// Exhaustive sum over all 2^(2^(L+1)-1) labelings, each decided by the same
// traversal logic as tcs_separate. Limited to depth <= 3.
double fa_bruteforce(const FaModelParams& params);

struct EmpiricalRate {
  double rate = 0.0;
  double std_error = 0.0;
  std::size_t instances = 0;
};

// Fraction of holdout rows flagged by tcs_separate, with its binomial
// standard error. Throws DataError on an empty holdout.
EmpiricalRate fa_empirical(const ScoreModel& model, const Dataset& holdout,
                           std::size_t threads = 0);

}  // namespace corrsep
