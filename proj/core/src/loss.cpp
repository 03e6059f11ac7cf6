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

#include "uamqa/loss.hpp"

#include <algorithm>
#include <cmath>

namespace uamqa {

template <typename T>
TensorD softmax(const BasicTensor<T>& logits) {
  require_rank(logits, 2, "softmax logits");
  const std::size_t n = logits.dim(0), k = logits.dim(1);
  TensorD probs({n, k});
  for (std::size_t i = 0; i < n; ++i) {
    const T* row = logits.raw() + i * k;
    const double mx = static_cast<double>(*std::max_element(row, row + k));
    double z = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double e = std::exp(static_cast<double>(row[j]) - mx);
      probs[i * k + j] = e;
      z += e;
    }
    for (std::size_t j = 0; j < k; ++j) probs[i * k + j] /= z;
  }
  return probs;
}

template <typename T>
LossGrad<T> softmax_cross_entropy(const BasicTensor<T>& logits,
                                  std::span<const ClassIndex> labels) {
  require_rank(logits, 2, "softmax_cross_entropy logits");
  const std::size_t n = logits.dim(0), k = logits.dim(1);
  if (labels.size() != n) {
    throw ShapeError("softmax_cross_entropy: " + std::to_string(labels.size()) +
                     " labels for logits " + shape_string(logits.shape()));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] >= k) {
      throw DataError("label " + std::to_string(labels[i]) + " at index " +
                        std::to_string(i) + " is out of range for " +
                        std::to_string(k) + " classes");
    }
  }

  LossGrad<T> out{0.0, BasicTensor<T>(logits.shape())};
  const double inv_n = 1.0 / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const T* row = logits.raw() + i * k;
    const double mx = static_cast<double>(*std::max_element(row, row + k));
    double z = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      z += std::exp(static_cast<double>(row[j]) - mx);
    }
    const double log_z = std::log(z);
    total += log_z - (static_cast<double>(row[labels[i]]) - mx);
    for (std::size_t j = 0; j < k; ++j) {
      const double p = std::exp(static_cast<double>(row[j]) - mx - log_z);
      const double onehot = j == labels[i] ? 1.0 : 0.0;
      out.dlogits[i * k + j] = static_cast<T>((p - onehot) * inv_n);
    }
  }
  out.loss = total * inv_n;
  return out;
}

template TensorD softmax(const BasicTensor<float>&);
template TensorD softmax(const BasicTensor<double>&);
template LossGrad<float> softmax_cross_entropy(const BasicTensor<float>&,
                                               std::span<const ClassIndex>);
template LossGrad<double> softmax_cross_entropy(const BasicTensor<double>&,
                                                std::span<const ClassIndex>);

}  // namespace uamqa
