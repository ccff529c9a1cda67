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

#include "corrsep/classifier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "corrsep/error.hpp"

namespace corrsep {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

LinearModel::LinearModel(std::vector<int> classes, std::size_t dims, std::vector<double> weights,
                         std::vector<double> bias)
    : classes_(std::move(classes)), dims_(dims), weights_(std::move(weights)),
      bias_(std::move(bias)) {
  if (weights_.size() != classes_.size() * dims_ || bias_.size() != classes_.size()) {
    throw ParameterError("model", "weight shape does not match classes and dims");
  }
}

int LinearModel::predict(std::span<const double> x) const {
  if (x.size() != dims_) throw DataError("classifier input has the wrong dimensionality");
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    double s = bias_[c];
    for (std::size_t a = 0; a < dims_; ++a) s += weights_[c * dims_ + a] * x[a];
    if (s > best_score) {
      best_score = s;
      best = c;
    }
  }
  return classes_[best];
}

std::vector<int> LinearModel::predict(const Dataset& data) const {
  std::vector<int> out(data.rows());
  for (std::size_t i = 0; i < data.rows(); ++i) out[i] = predict(data.row(i));
  return out;
}

LinearModel train_linear_classifier(const Dataset& train, double ridge) {
  if (!train.has_labels()) throw DataError("classifier training data has no labels");
  if (!(ridge >= 0.0)) throw ParameterError("ridge", "must be >= 0");
  std::vector<int> classes = train.labels();
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.size() < 2) throw DataError("classifier needs at least two classes");

  const auto n = static_cast<Eigen::Index>(train.rows());
  const auto d = static_cast<Eigen::Index>(train.dims());
  const auto k = static_cast<Eigen::Index>(classes.size());
  const Eigen::Map<const RowMatrix> x(train.values().data(), n, d);

  Eigen::MatrixXd y = Eigen::MatrixXd::Constant(n, k, -1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto pos = std::lower_bound(classes.begin(), classes.end(),
                                      train.labels()[static_cast<std::size_t>(i)]);
    y(i, pos - classes.begin()) = 1.0;
  }
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const Eigen::RowVectorXd y_mean = y.colwise().mean();
  const Eigen::MatrixXd xc = x.rowwise() - x_mean;
  const Eigen::MatrixXd yc = y.rowwise() - y_mean;

  Eigen::MatrixXd gram = xc.transpose() * xc;
  gram.diagonal().array() += ridge;
  const Eigen::MatrixXd w = gram.completeOrthogonalDecomposition().solve(xc.transpose() * yc);
  const Eigen::RowVectorXd b = y_mean - x_mean * w;

  std::vector<double> weights(static_cast<std::size_t>(k * d));
  std::vector<double> bias(static_cast<std::size_t>(k));
  for (Eigen::Index c = 0; c < k; ++c) {
    bias[static_cast<std::size_t>(c)] = b(c);
    for (Eigen::Index a = 0; a < d; ++a) {
      weights[static_cast<std::size_t>(c * d + a)] = w(a, c);
    }
  }
  return LinearModel(std::move(classes), train.dims(), std::move(weights), std::move(bias));
}

double accuracy(const LinearModel& model, const Dataset& test) {
  if (!test.has_labels()) throw DataError("accuracy needs labeled data");
  if (test.empty()) throw DataError("accuracy of an empty set is undefined");
  const auto predicted = model.predict(test);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.rows(); ++i) {
    if (predicted[i] == test.labels()[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.rows());
}

}  // namespace corrsep
