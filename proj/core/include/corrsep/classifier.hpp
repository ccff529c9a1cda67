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
#include <span>
#include <vector>

#include "corrsep/dataset.hpp"

namespace corrsep {

// One-vs-rest linear classifier: class c scores w_c . x + b_c and the
// highest score wins (lowest class id on ties).
class LinearModel {
 public:
  LinearModel(std::vector<int> classes, std::size_t dims, std::vector<double> weights,
              std::vector<double> bias);

  const std::vector<int>& classes() const { return classes_; }
  std::size_t dims() const { return dims_; }
  // Row-major classes x dims.
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& bias() const { return bias_; }

  int predict(std::span<const double> x) const;
  std::vector<int> predict(const Dataset& data) const;

 private:
  std::vector<int> classes_;
  std::size_t dims_;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

// Ridge-regularized least squares on +1/-1 targets, one column per class.
// Features are centered so the bias is not penalized. Throws DataError when
// labels are missing or fewer than two classes occur, ParameterError("ridge")
// for a negative ridge.
LinearModel train_linear_classifier(const Dataset& train, double ridge);

// Fraction of rows whose predicted class equals the label.
double accuracy(const LinearModel& model, const Dataset& test);

}  // namespace corrsep
