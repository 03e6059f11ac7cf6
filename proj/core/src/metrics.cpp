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

#include "uamqa/metrics.hpp"

#include <charconv>
#include <sstream>

#include "uamqa/errors.hpp"

namespace uamqa {

namespace {

std::vector<std::string> numbered(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names)
    : names_(std::move(class_names)),
      counts_(names_.size() * names_.size(), 0) {
  if (names_.empty()) throw ConfigError("confusion matrix needs at least one class");
}

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes)
    : ConfusionMatrix(numbered(num_classes)) {}

void ConfusionMatrix::add(ClassIndex truth, ClassIndex predicted,
                          std::uint64_t count) {
  const std::size_t n = num_classes();
  if (truth >= n || predicted >= n) {
    throw DataError("confusion entry (" + std::to_string(truth) + ", " +
                    std::to_string(predicted) + ") outside " +
                    std::to_string(n) + " classes");
  }
  counts_[truth * n + predicted] += count;
}

std::uint64_t ConfusionMatrix::at(std::size_t truth, std::size_t predicted) const {
  const std::size_t n = num_classes();
  if (truth >= n || predicted >= n) {
    throw ShapeError("confusion index out of range");
  }
  return counts_[truth * n + predicted];
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (const auto c : counts_) t += c;
  return t;
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::size_t k = 0; k < num_classes(); ++k) t += at(k, k);
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(std::size_t truth) const {
  std::uint64_t t = 0;
  for (std::size_t j = 0; j < num_classes(); ++j) t += at(truth, j);
  return t;
}

std::uint64_t ConfusionMatrix::col_sum(std::size_t predicted) const {
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < num_classes(); ++i) t += at(i, predicted);
  return t;
}

std::string ConfusionMatrix::to_csv() const {
  std::string out = "true\\predicted";
  for (const auto& name : names_) out += "," + name;
  out += "\n";
  for (std::size_t i = 0; i < num_classes(); ++i) {
    out += names_[i];
    for (std::size_t j = 0; j < num_classes(); ++j) {
      out += "," + std::to_string(at(i, j));
    }
    out += "\n";
  }
  return out;
}

ConfusionMatrix ConfusionMatrix::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("confusion CSV is empty");
  auto header = split_csv_line(line);
  if (header.size() < 2) throw DataError("confusion CSV header has no classes");
  ConfusionMatrix cm(std::vector<std::string>(header.begin() + 1, header.end()));
  const std::size_t n = cm.num_classes();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) {
      throw DataError("confusion CSV has " + std::to_string(i) + " rows, expected " +
                      std::to_string(n));
    }
    const auto cells = split_csv_line(line);
    if (cells.size() != n + 1 || cells[0] != cm.names_[i]) {
      throw DataError("confusion CSV row " + std::to_string(i + 1) + " is malformed");
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t v = 0;
      const auto& c = cells[j + 1];
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size()) {
        throw DataError("confusion CSV cell '" + c + "' is not a count");
      }
      cm.counts_[i * n + j] = v;
    }
  }
  return cm;
}

BinaryCounts binary_counts(const ConfusionMatrix& cm) {
  if (cm.num_classes() != 2) {
    throw ShapeError("binary counts need a 2x2 matrix, got " +
                     std::to_string(cm.num_classes()) + " classes");
  }
  return {cm.at(1, 1), cm.at(0, 0), cm.at(0, 1), cm.at(1, 0)};
}

double accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw DataError("accuracy of an empty confusion matrix");
  if (cm.num_classes() == 2) {
    const BinaryCounts b = binary_counts(cm);
    return static_cast<double>(b.tp + b.tn) /
           static_cast<double>(b.tp + b.tn + b.fp + b.fn);
  }
  return static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
}

std::vector<ClassMetrics> per_class_metrics(const ConfusionMatrix& cm) {
  std::vector<ClassMetrics> out(cm.num_classes());
  for (std::size_t k = 0; k < cm.num_classes(); ++k) {
    const auto hit = static_cast<double>(cm.at(k, k));
    if (const auto col = cm.col_sum(k); col > 0) {
      out[k].precision = hit / static_cast<double>(col);
    }
    if (const auto row = cm.row_sum(k); row > 0) {
      out[k].recall = hit / static_cast<double>(row);
    }
  }
  return out;
}

}  // namespace uamqa
