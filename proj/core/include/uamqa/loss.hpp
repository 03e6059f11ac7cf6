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
#include <span>

#include "uamqa/tensor.hpp"

namespace uamqa {

using ClassIndex = std::uint32_t;

template <typename T>
struct LossGrad {
  double loss = 0.0;         // mean over the batch
  BasicTensor<T> dlogits;    // (softmax - onehot) / N
};

/// Mean softmax cross-entropy over a [N, n] batch of logits. Evaluated in
/// double with max-subtraction regardless of T.
template <typename T>
LossGrad<T> softmax_cross_entropy(const BasicTensor<T>& logits,
                                  std::span<const ClassIndex> labels);

/// Row-wise softmax probabilities in double.
template <typename T>
TensorD softmax(const BasicTensor<T>& logits);

}  // namespace uamqa
