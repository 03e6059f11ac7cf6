// Copyright 2026 The uamqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <random>

#include "uamqa/errors.hpp"
#include "uamqa/metrics.hpp"

namespace uamqa {
namespace {

ConfusionMatrix from_rows(const std::vector<std::vector<std::uint64_t>>& rows) {
  ConfusionMatrix cm(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j)
      cm.add(static_cast<ClassIndex>(i), static_cast<ClassIndex>(j), rows[i][j]);
  return cm;
}

TEST(Accuracy, BinaryExamples) {
  EXPECT_EQ(accuracy(from_rows({{50, 0}, {0, 50}})), 1.0);
  EXPECT_DOUBLE_EQ(accuracy(from_rows({{45, 5}, {3, 47}})), 0.92);
  const auto b = binary_counts(from_rows({{45, 5}, {3, 47}}));
  EXPECT_EQ(b.tp, 47u);
  EXPECT_EQ(b.tn, 45u);
  EXPECT_EQ(b.fp, 5u);
  EXPECT_EQ(b.fn, 3u);
}

TEST(Accuracy, MulticlassTrace) {
  ConfusionMatrix cm(10);
  for (ClassIndex k = 0; k < 10; ++k) cm.add(k, k, 97);
  cm.add(0, 0, 3);
  cm.add(1, 2, 27);
  EXPECT_EQ(cm.trace(), 973u);
  EXPECT_EQ(cm.total(), 1000u);
  EXPECT_DOUBLE_EQ(accuracy(cm), 0.973);
}

TEST(Accuracy, RandomizedIdentities) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> size(2, 10), count(0, 50);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = static_cast<std::size_t>(size(rng));
    ConfusionMatrix cm(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        cm.add(static_cast<ClassIndex>(i), static_cast<ClassIndex>(j),
               static_cast<std::uint64_t>(count(rng)));
    if (cm.total() == 0) continue;
    const double trace_ratio = static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
    EXPECT_EQ(accuracy(cm), trace_ratio);
    if (n == 2) {
      const auto b = binary_counts(cm);
      EXPECT_EQ(accuracy(cm), static_cast<double>(b.tp + b.tn) /
                                  static_cast<double>(b.tp + b.tn + b.fp + b.fn));
    }
    std::uint64_t rows = 0;
    for (std::size_t i = 0; i < n; ++i) rows += cm.row_sum(i);
    EXPECT_EQ(rows, cm.total());
  }
}

TEST(Accuracy, EmptyMatrixIsError) { EXPECT_THROW(accuracy(ConfusionMatrix(3)), DataError); }

TEST(PerClass, PrecisionRecall) {
  const auto m = per_class_metrics(from_rows({{8, 2}, {0, 10}}));
  EXPECT_DOUBLE_EQ(*m[0].recall, 0.8);
  EXPECT_DOUBLE_EQ(*m[1].precision, 10.0 / 12.0);
  EXPECT_DOUBLE_EQ(*m[0].precision, 1.0);
  for (const auto& c : per_class_metrics(from_rows({{3, 0, 0}, {0, 4, 0}, {0, 0, 5}}))) {
    EXPECT_EQ(*c.precision, 1.0);
    EXPECT_EQ(*c.recall, 1.0);
  }
  const auto absent = per_class_metrics(from_rows({{3, 1}, {0, 0}}));
  EXPECT_FALSE(absent[1].recall.has_value());
  EXPECT_TRUE(absent[1].precision.has_value());
  EXPECT_EQ(*absent[1].precision, 0.0);
}

TEST(ConfusionMatrix, CsvRoundTrip) {
  ConfusionMatrix cm({"baseline_900W", "thermocouple_900W"});
  cm.add(0, 0, 31);
  cm.add(0, 1, 1);
  cm.add(1, 1, 32);
  const std::string csv = cm.to_csv();
  EXPECT_EQ(csv,
            "true\\predicted,baseline_900W,thermocouple_900W\n"
            "baseline_900W,31,1\n"
            "thermocouple_900W,0,32\n");
  EXPECT_EQ(ConfusionMatrix::from_csv(csv), cm);
  EXPECT_THROW(ConfusionMatrix::from_csv("a,b\nb,x\n"), DataError);
}

TEST(ConfusionMatrix, OutOfRangeEntry) {
  ConfusionMatrix cm(2);
  EXPECT_THROW(cm.add(2, 0), DataError);
}

}  // namespace
}  // namespace uamqa
