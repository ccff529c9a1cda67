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

#include "corrsep/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "corrsep/error.hpp"

namespace corrsep {

void validate_range(AttributeRange range, std::size_t dims) {
  if (range.start >= range.end || range.end > dims) {
    throw ParameterError("range", "attribute range [" + std::to_string(range.start) + ", " +
                                      std::to_string(range.end) + ") invalid for " +
                                      std::to_string(dims) + " attributes");
  }
}

Dataset::Dataset(std::size_t rows, std::size_t dims, std::vector<double> values,
                 std::optional<std::vector<int>> labels, CsvLayout layout)
    : rows_(rows),
      dims_(dims),
      values_(std::move(values)),
      labels_(std::move(labels)),
      layout_(std::move(layout)) {
  if (values_.size() != rows_ * dims_) {
    throw DataError("dataset: expected " + std::to_string(rows_ * dims_) + " values, got " +
                    std::to_string(values_.size()));
  }
  if (labels_ && labels_->size() != rows_) {
    throw DataError("dataset: label count does not match row count");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DataError("dataset: non-finite value");
  }
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows,
                           std::optional<std::vector<int>> labels) {
  const std::size_t dims = rows.empty() ? 0 : rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * dims);
  for (const auto& r : rows) {
    if (r.size() != dims) throw DataError("dataset: ragged rows");
    values.insert(values.end(), r.begin(), r.end());
  }
  return Dataset(rows.size(), dims, std::move(values), std::move(labels));
}

const std::vector<int>& Dataset::labels() const {
  if (!labels_) throw DataError("dataset has no labels");
  return *labels_;
}

Dataset Dataset::with_values(std::vector<double> values) const {
  return Dataset(rows_, dims_, std::move(values), labels_, layout_);
}

Dataset Dataset::select_rows(std::span<const std::size_t> indices) const {
  std::vector<double> values;
  values.reserve(indices.size() * dims_);
  std::optional<std::vector<int>> labels;
  if (labels_) labels.emplace();
  for (std::size_t i : indices) {
    if (i >= rows_) throw ParameterError("rows", "row index out of range");
    auto r = row(i);
    values.insert(values.end(), r.begin(), r.end());
    if (labels) labels->push_back((*labels_)[i]);
  }
  return Dataset(indices.size(), dims_, std::move(values), std::move(labels), layout_);
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    cells.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return cells;
}

std::optional<double> parse_real(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<int> parse_label(std::string_view cell) {
  int label = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), label);
  if (ec == std::errc() && ptr == cell.data() + cell.size()) return label;
  // Accept integral reals such as "1.0".
  if (auto real = parse_real(cell); real && *real == std::floor(*real) &&
                                    std::abs(*real) < 2147483647.0) {
    return static_cast<int>(*real);
  }
  return std::nullopt;
}

}  // namespace

Dataset parse_csv(std::istream& in, const CsvOptions& options, const std::string& source_name) {
  CsvLayout layout;
  std::vector<double> values;
  std::vector<int> labels;
  std::optional<std::size_t> columns;
  std::size_t label_col = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool header_pending = options.has_header;

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_cells(line);
    if (!columns) {
      columns = cells.size();
      if (options.has_labels) {
        label_col = options.label_column.value_or(*columns - 1);
        if (label_col >= *columns) {
          throw ParameterError("label_column", "label column " + std::to_string(label_col) +
                                                   " outside " + std::to_string(*columns) +
                                                   " columns");
        }
        if (*columns < 2) throw DataError(source_name + ": no attribute columns");
        layout.label_column = label_col;
      }
    } else if (cells.size() != *columns) {
      throw DataError(source_name + ":" + std::to_string(line_no) + ": ragged row with " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(*columns));
    }
    if (header_pending) {
      header_pending = false;
      for (auto c : cells) layout.header.emplace_back(c);
      continue;
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (options.has_labels && c == label_col) {
        auto label = parse_label(cells[c]);
        if (!label) {
          throw DataError(source_name + ":" + std::to_string(line_no) + ": column " +
                          std::to_string(c + 1) + ": invalid label '" + std::string(cells[c]) +
                          "'");
        }
        labels.push_back(*label);
        continue;
      }
      auto value = parse_real(cells[c]);
      if (!value) {
        throw DataError(source_name + ":" + std::to_string(line_no) + ": column " +
                        std::to_string(c + 1) + ": non-numeric cell '" + std::string(cells[c]) +
                        "'");
      }
      values.push_back(*value);
    }
    ++rows;
  }
  if (rows == 0) throw DataError(source_name + ": no data rows");
  const std::size_t dims = *columns - (options.has_labels ? 1 : 0);
  std::optional<std::vector<int>> label_vec;
  if (options.has_labels) label_vec = std::move(labels);
  return Dataset(rows, dims, std::move(values), std::move(label_vec), std::move(layout));
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open for reading");
  return parse_csv(in, options, path.string());
}

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw DataError("cannot format value");
  return std::string(buf, ptr);
}

void write_csv(std::ostream& out, const Dataset& data) {
  const auto& layout = data.layout();
  const bool labels = data.has_labels() && layout.label_column.has_value();
  const std::size_t columns = data.dims() + (labels ? 1 : 0);
  if (!layout.header.empty() && layout.header.size() == columns) {
    for (std::size_t c = 0; c < columns; ++c) {
      if (c) out << ',';
      out << layout.header[c];
    }
    out << '\n';
  }
  for (std::size_t i = 0; i < data.rows(); ++i) {
    std::size_t attr = 0;
    for (std::size_t c = 0; c < columns; ++c) {
      if (c) out << ',';
      if (labels && c == *layout.label_column) {
        out << data.labels()[i];
      } else {
        out << format_real(data.at(i, attr++));
      }
    }
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot open for writing");
  write_csv(out, data);
}

std::pair<Dataset, ScalingParams> scale_unit(const Dataset& fit) {
  if (fit.empty()) throw DataError("scale_unit: empty fit set");
  ScalingParams params;
  params.min.assign(fit.dims(), 0.0);
  params.max.assign(fit.dims(), 0.0);
  for (std::size_t j = 0; j < fit.dims(); ++j) {
    double lo = fit.at(0, j);
    double hi = lo;
    for (std::size_t i = 1; i < fit.rows(); ++i) {
      lo = std::min(lo, fit.at(i, j));
      hi = std::max(hi, fit.at(i, j));
    }
    params.min[j] = lo;
    params.max[j] = hi;
  }
  return {apply_scaling(fit, params), std::move(params)};
}

Dataset apply_scaling(const Dataset& data, const ScalingParams& params) {
  if (params.min.size() != data.dims() || params.max.size() != data.dims()) {
    throw ParameterError("scaling", "parameter dimensionality mismatch");
  }
  std::vector<double> values(data.values().size());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.dims(); ++j) {
      const double span = params.max[j] - params.min[j];
      values[i * data.dims() + j] = span > 0.0 ? (data.at(i, j) - params.min[j]) / span : 0.0;
    }
  }
  return data.with_values(std::move(values));
}

Dataset invert_scaling(const Dataset& data, const ScalingParams& params) {
  if (params.min.size() != data.dims() || params.max.size() != data.dims()) {
    throw ParameterError("scaling", "parameter dimensionality mismatch");
  }
  std::vector<double> values(data.values().size());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.dims(); ++j) {
      const double span = params.max[j] - params.min[j];
      values[i * data.dims() + j] = data.at(i, j) * span + params.min[j];
    }
  }
  return data.with_values(std::move(values));
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& data, double train_fraction,
                                             std::uint64_t seed, SplitCaps caps) {
  if (data.rows() < 2) throw DataError("split_train_test: need at least 2 rows");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ParameterError("train_fraction", "must lie in (0,1)");
  }
  const std::size_t n = data.rows();
  auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n)));
  n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  if (caps.max_train && train.size() > *caps.max_train) train.resize(*caps.max_train);
  if (caps.max_test && test.size() > *caps.max_test) test.resize(*caps.max_test);
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {data.select_rows(train), data.select_rows(test)};
}

}  // namespace corrsep
