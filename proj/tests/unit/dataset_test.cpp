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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "corrsep/dataset.hpp"
#include "corrsep/error.hpp"

namespace corrsep {
namespace {

Dataset parse(const std::string& text, CsvOptions options = {}) {
  std::istringstream in(text);
  return parse_csv(in, options, "inline.csv");
}

TEST(LoadCsv, ParsesThreeByTwo) {
  const Dataset d = parse("0.1,0.2\n0.3,0.4\n0.5,0.6\n");
  EXPECT_EQ(d.rows(), 3u);
  EXPECT_EQ(d.dims(), 2u);
  EXPECT_DOUBLE_EQ(d.at(2, 1), 0.6);
  EXPECT_FALSE(d.has_labels());
}

TEST(LoadCsv, RaggedRowIsRejected) {
  try {
    parse("0.1,0.2\n0.3,0.4,0.9\n");
    FAIL() << "expected a ragged-row error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("ragged"), std::string::npos);
  }
}

TEST(LoadCsv, NonNumericCellIsNamed) {
  try {
    parse("0.1,0.2\n0.3,abc\n");
    FAIL() << "expected a parse error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("'abc'"), std::string::npos);
  }
}

TEST(LoadCsv, HeaderAndLabelColumn) {
  CsvOptions options;
  options.has_header = true;
  options.label_column = 0;
  options.has_labels = true;
  const Dataset d = parse("y,a,b\n1,0.5,0.25\n0,0.75,1\n", options);
  ASSERT_EQ(d.dims(), 2u);
  EXPECT_EQ(d.labels(), (std::vector<int>{1, 0}));
  EXPECT_DOUBLE_EQ(d.at(1, 0), 0.75);
  EXPECT_EQ(d.layout().header.size(), 3u);
}

TEST(LoadCsv, MissingFileIsDataError) {
  EXPECT_THROW(load_csv("/nonexistent/corrsep/input.csv"), DataError);
}

TEST(WriteCsv, RoundTripsThroughText) {
  const Dataset d = Dataset::from_rows({{0.1, 1.0 / 3.0}, {2.5e-17, 7.0}});
  std::ostringstream out;
  write_csv(out, d);
  const Dataset back = parse(out.str());
  EXPECT_EQ(back.values(), d.values());
}

TEST(ScaleUnit, AffineMapOfColumn) {
  const auto [scaled, params] = scale_unit(Dataset::from_rows({{0.0}, {5.0}, {10.0}}));
  EXPECT_EQ(scaled.values(), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_DOUBLE_EQ(params.min[0], 0.0);
  EXPECT_DOUBLE_EQ(params.max[0], 10.0);
}

TEST(ScaleUnit, ConstantColumnMapsToZero) {
  const auto [scaled, params] = scale_unit(Dataset::from_rows({{3.0}, {3.0}, {3.0}}));
  EXPECT_EQ(scaled.values(), (std::vector<double>{0.0, 0.0, 0.0}));
}

TEST(ScaleUnit, TestValuesAreNotClipped) {
  ScalingParams params{{0.0}, {10.0}};
  const Dataset out = apply_scaling(Dataset::from_rows({{12.0}, {-1.0}}), params);
  EXPECT_DOUBLE_EQ(out.at(0, 0), 1.2);
  EXPECT_DOUBLE_EQ(out.at(1, 0), -0.1);
}

TEST(ScaleUnit, InverseRoundTrip) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(4.0, 30.0);
  std::vector<std::vector<double>> rows(40, std::vector<double>(6));
  for (auto& r : rows) {
    for (double& v : r) v = g(rng);
  }
  const Dataset fit = Dataset::from_rows(rows);
  const auto [scaled, params] = scale_unit(fit);
  for (double v : scaled.values()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  const Dataset back = invert_scaling(scaled, params);
  for (std::size_t i = 0; i < fit.values().size(); ++i) {
    EXPECT_NEAR(back.values()[i], fit.values()[i], 1e-12);
  }
}

Dataset numbered(std::size_t n) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < n; ++i) rows.push_back({static_cast<double>(i)});
  return Dataset::from_rows(rows);
}

std::set<double> column(const Dataset& d) {
  return {d.values().begin(), d.values().end()};
}

TEST(SplitTrainTest, CardinalityAndDisjointness) {
  const auto [train, test] = split_train_test(numbered(9), 2.0 / 3.0, 7);
  EXPECT_EQ(train.rows(), 6u);
  EXPECT_EQ(test.rows(), 3u);
  std::set<double> all = column(train);
  for (double v : column(test)) EXPECT_TRUE(all.insert(v).second);
  EXPECT_EQ(all.size(), 9u);
}

TEST(SplitTrainTest, SameSeedSamePartition) {
  const auto a = split_train_test(numbered(50), 0.5, 7);
  const auto b = split_train_test(numbered(50), 0.5, 7);
  EXPECT_EQ(a.first.values(), b.first.values());
  EXPECT_EQ(a.second.values(), b.second.values());
}

TEST(SplitTrainTest, CapsLimitBothSides) {
  const auto [train, test] = split_train_test(numbered(3000), 0.5, 11, {1000, 500});
  EXPECT_EQ(train.rows(), 1000u);
  EXPECT_EQ(test.rows(), 500u);
}

TEST(SplitTrainTest, RejectsFractionOutsideUnitInterval) {
  EXPECT_THROW(split_train_test(numbered(10), 1.0, 1), ParameterError);
}

TEST(Dataset, RejectsNonFiniteValues) {
  EXPECT_THROW(Dataset(1, 1, {std::nan("")}), DataError);
}

}  // namespace
}  // namespace corrsep
