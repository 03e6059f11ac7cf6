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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uamqa/loss.hpp"

namespace uamqa {

/// n x n prediction counts; rows are true classes, columns predictions.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<std::string> class_names);
  /// Unnamed classes "0" ... "n-1".
  explicit ConfusionMatrix(std::size_t num_classes);

  std::size_t num_classes() const { return names_.size(); }
  const std::vector<std::string>& class_names() const { return names_; }

  void add(ClassIndex truth, ClassIndex predicted, std::uint64_t count = 1);
  std::uint64_t at(std::size_t truth, std::size_t predicted) const;

  std::uint64_t total() const;
  std::uint64_t trace() const;
  std::uint64_t row_sum(std::size_t truth) const;
  std::uint64_t col_sum(std::size_t predicted) const;

  /// Header row and first column carry the class names.
  std::string to_csv() const;
  static ConfusionMatrix from_csv(const std::string& text);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::uint64_t> counts_;
};

struct BinaryCounts {
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
};

/// TP/TN/FP/FN of a 2x2 matrix with class 1 as the positive class.
BinaryCounts binary_counts(const ConfusionMatrix& cm);

/// (TP + TN) / (TP + TN + FP + FN) for two classes, trace / total otherwise.
/// Throws DataError on an empty matrix.
double accuracy(const ConfusionMatrix& cm);

struct ClassMetrics {
  std::optional<double> precision;  // nullopt when nothing was predicted as k
  std::optional<double> recall;     // nullopt when class k has no support
};

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm);

}  // namespace uamqa
