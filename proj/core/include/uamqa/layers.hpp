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
#include <string>
#include <vector>

#include "uamqa/tensor.hpp"

namespace uamqa {

enum class LayerKind { Conv2d, ReLU, MaxPool2d, Flatten, Linear };

std::string to_string(LayerKind kind);
LayerKind layer_kind_from_string(const std::string& name);

/// One row of the network's layer table. Fields a kind does not use stay 0.
/// For Linear layers in_channels/out_channels carry the feature widths.
struct LayerSpec {
  LayerKind kind = LayerKind::ReLU;
  int kernel_size = 0;
  int stride = 0;
  int padding = 0;
  int dilation = 0;
  int in_channels = 0;
  int out_channels = 0;

  static LayerSpec conv2d(int in_channels, int out_channels);
  static LayerSpec relu();
  static LayerSpec maxpool2d();
  static LayerSpec flatten();
  static LayerSpec linear(int in_features, int out_features);

  bool has_parameters() const {
    return kind == LayerKind::Conv2d || kind == LayerKind::Linear;
  }

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// Batched layer kernels. Activations are [N, C, H, W] or [N, F]. Work is
// split across samples (or output features for Linear); each output element
// is accumulated in a fixed order, so results do not depend on thread count.

/// Stride-1, dilation-1 convolution with zero padding. Weights are
/// [C_out, C_in, k, k].
template <typename T>
BasicTensor<T> conv2d_forward(const BasicTensor<T>& input,
                              const BasicTensor<T>& weights,
                              const BasicTensor<T>& bias,
                              const LayerSpec& spec);

template <typename T>
struct Conv2dGrads {
  BasicTensor<T> input;  // empty unless requested
  BasicTensor<T> weights;
  BasicTensor<T> bias;
};

template <typename T>
Conv2dGrads<T> conv2d_backward(const BasicTensor<T>& input,
                               const BasicTensor<T>& weights,
                               const BasicTensor<T>& grad_output,
                               const LayerSpec& spec, bool need_input_grad);

template <typename T>
struct MaxPoolResult {
  BasicTensor<T> output;
  /// Flat index into the input tensor of each output's maximum.
  std::vector<std::uint32_t> argmax;
};

/// 2x2 stride-2 max pooling. Ties resolve to the first element in row-major
/// order within the window.
template <typename T>
MaxPoolResult<T> maxpool2d_forward(const BasicTensor<T>& input);

template <typename T>
BasicTensor<T> maxpool2d_backward(const BasicTensor<T>& grad_output,
                                  const std::vector<std::uint32_t>& argmax,
                                  const Shape& input_shape);

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& input);

/// Passes gradient where input > 0; the subgradient at 0 is 0.
template <typename T>
BasicTensor<T> relu_backward(const BasicTensor<T>& grad_output,
                             const BasicTensor<T>& input);

/// x * W^T + b with x [N, F_in], W [F_out, F_in], b [F_out].
template <typename T>
BasicTensor<T> linear_forward(const BasicTensor<T>& input,
                              const BasicTensor<T>& weights,
                              const BasicTensor<T>& bias);

template <typename T>
struct LinearGrads {
  BasicTensor<T> input;
  BasicTensor<T> weights;
  BasicTensor<T> bias;
};

template <typename T>
LinearGrads<T> linear_backward(const BasicTensor<T>& input,
                               const BasicTensor<T>& weights,
                               const BasicTensor<T>& grad_output);

}  // namespace uamqa
