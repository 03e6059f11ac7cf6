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

#include <cmath>

#include "test_support.hpp"
#include "uamqa/errors.hpp"
#include "uamqa/loss.hpp"

namespace uamqa {
namespace {

TEST(Loss, UniformLogitsGiveLogN) {
  const TensorD logits({3, 5}, 0.7);
  const std::vector<ClassIndex> labels{0, 2, 4};
  EXPECT_NEAR(softmax_cross_entropy(logits, labels).loss, std::log(5.0), 1e-12);
}

TEST(Loss, MatchesLogSumExpOracle) {
  const auto logits = testing::random_tensor<double>({6, 4}, 3, -5.0, 5.0);
  const std::vector<ClassIndex> labels{0, 1, 2, 3, 1, 0};
  double want = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    long double z = 0.0L;
    for (std::size_t j = 0; j < 4; ++j) z += std::exp(static_cast<long double>(logits(i, j)));
    want += static_cast<double>(std::log(z) - logits(i, labels[i]));
  }
  const auto r = softmax_cross_entropy(logits, labels);
  EXPECT_NEAR(r.loss, want / 6.0, 1e-12);
  for (std::size_t i = 0; i < 6; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < 4; ++j) row += r.dlogits(i, j);
    EXPECT_NEAR(row, 0.0, 1e-9);
  }
}

TEST(Loss, StableForLargeLogits) {
  const TensorD logits({1, 2}, std::vector<double>{1000.0, 0.0});
  const std::vector<ClassIndex> labels{1};
  const auto r = softmax_cross_entropy(logits, labels);
  EXPECT_NEAR(r.loss, 1000.0, 1e-9);
  EXPECT_TRUE(r.dlogits.all_finite());
}

TEST(Loss, FloatLogitsAccumulateInDouble) {
  const Tensor logits({2, 3}, std::vector<float>{1, 2, 3, 3, 2, 1});
  const std::vector<ClassIndex> labels{2, 0};
  const auto r = softmax_cross_entropy(logits, labels);
  const double want = std::log(std::exp(1.0) + std::exp(2.0) + std::exp(3.0)) - 3.0;
  EXPECT_NEAR(r.loss, want, 1e-12);
}

TEST(Loss, LabelOutOfRangeIsDataError) {
  const TensorD logits({2, 3});
  const std::vector<ClassIndex> labels{0, 3};
  try {
    softmax_cross_entropy(logits, labels);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("label 3"), std::string::npos);
  }
  const std::vector<ClassIndex> short_labels{0};
  EXPECT_THROW(softmax_cross_entropy(logits, short_labels), ShapeError);
}

TEST(Softmax, RowsSumToOne) {
  const auto logits = testing::random_tensor<float>({5, 7}, 8, -3.0, 3.0);
  const TensorD p = softmax(logits);
  for (std::size_t i = 0; i < 5; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < 7; ++j) s += p(i, j);
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace uamqa
