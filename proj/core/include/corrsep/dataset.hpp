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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace corrsep {

// Half-open interval [start, end) of attribute indices.
struct AttributeRange {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool contains(std::size_t attribute) const {
    return attribute >= start && attribute < end;
  }
  friend bool operator==(const AttributeRange&, const AttributeRange&) = default;
};

// Throws ParameterError("range") unless 0 <= start < end <= dims.
void validate_range(AttributeRange range, std::size_t dims);

// How a dataset was laid out on disk, so outputs can mirror the input.
struct CsvLayout {
  std::vector<std::string> header;             // empty when the file had none
  std::optional<std::size_t> label_column;     // position among file columns
};

// Row-major N x d matrix of reals with optional integer class labels.
// Immutable once constructed; derived datasets are built as new values.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t rows, std::size_t dims, std::vector<double> values,
          std::optional<std::vector<int>> labels = std::nullopt,
          CsvLayout layout = {});

  static Dataset from_rows(const std::vector<std::vector<double>>& rows,
                           std::optional<std::vector<int>> labels = std::nullopt);

  std::size_t rows() const { return rows_; }
  std::size_t dims() const { return dims_; }
  bool empty() const { return rows_ == 0; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dims_, dims_};
  }
  std::span<const double> slice(std::size_t i, AttributeRange range) const {
    return {values_.data() + i * dims_ + range.start, range.size()};
  }
  double at(std::size_t i, std::size_t j) const { return values_[i * dims_ + j]; }
  const std::vector<double>& values() const { return values_; }

  bool has_labels() const { return labels_.has_value(); }
  const std::vector<int>& labels() const;
  const CsvLayout& layout() const { return layout_; }

  // Same shape, labels and layout; new cell values.
  Dataset with_values(std::vector<double> values) const;
  Dataset select_rows(std::span<const std::size_t> indices) const;

 private:
  std::size_t rows_ = 0;
  std::size_t dims_ = 0;
  std::vector<double> values_;
  std::optional<std::vector<int>> labels_;
  CsvLayout layout_;
};

struct CsvOptions {
  bool has_header = false;
  bool has_labels = false;
  // Column holding the label; defaults to the last column when has_labels.
  std::optional<std::size_t> label_column;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(std::istream& in, const CsvOptions& options,
                  const std::string& source_name = "<stream>");

// Writes cells with the shortest round-trip representation, re-inserting the
// label column and header recorded in the dataset layout.
void write_csv(std::ostream& out, const Dataset& data);
void write_csv(const std::filesystem::path& path, const Dataset& data);

std::string format_real(double value);

struct ScalingParams {
  std::vector<double> min;
  std::vector<double> max;
};

// Affine map of each attribute onto [0,1] using the fit set's min/max.
// Constant attributes map to 0.
std::pair<Dataset, ScalingParams> scale_unit(const Dataset& fit);
// Applies fitted params without clipping: out-of-range values extrapolate.
Dataset apply_scaling(const Dataset& data, const ScalingParams& params);
Dataset invert_scaling(const Dataset& data, const ScalingParams& params);

struct SplitCaps {
  std::optional<std::size_t> max_train;
  std::optional<std::size_t> max_test;
};

// Seeded disjoint row partition; caps are applied after partitioning. Rows
// keep their original relative order within each part.
std::pair<Dataset, Dataset> split_train_test(const Dataset& data, double train_fraction,
                                             std::uint64_t seed, SplitCaps caps = {});

}  // namespace corrsep
