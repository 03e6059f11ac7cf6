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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "uamqa/layers.hpp"
#include "uamqa/loss.hpp"
#include "uamqa/tensor.hpp"

namespace uamqa {

/// Widths of the two-block convolutional classifier:
///
///   Conv2d(3x3, same) -> ReLU -> MaxPool(2) ->
///   Conv2d(3x3, same) -> ReLU -> MaxPool(2) ->
///   Flatten -> Linear(hidden) -> ReLU -> Linear(num_classes)
///
/// The defaults (3 input channels, 32/64 conv channels, same padding, hidden
/// width 128) give a parameter total of 13,126,720 + 129 * num_classes,
/// matching the published counts of the 2-, 5- and 10-class models. See
/// README for the derivation.
struct ModelConfig {
  std::size_t input_channels = 3;
  std::size_t input_height = 160;
  std::size_t input_width = 160;
  std::size_t conv1_out = 32;
  std::size_t conv2_out = 64;
  std::size_t hidden_width = 128;
  std::size_t num_classes = 2;

  static ModelConfig standard(std::size_t num_classes);
  /// 3x16x16 input, 4/8 channels, hidden 8; used for gradient checks.
  static ModelConfig miniature(std::size_t num_classes);

  /// Layer table in declaration order. Throws ShapeError if a pooling stage
  /// would see an odd spatial extent.
  std::vector<LayerSpec> layers() const;
  Shape input_shape() const {
    return {input_channels, input_height, input_width};
  }
  std::size_t flatten_width() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

/// Exact number of trainable scalars (weights + biases).
std::size_t param_count(const ModelConfig& config);

/// Activations a forward pass keeps for backward.
template <typename T>
struct ForwardCache {
  std::vector<BasicTensor<T>> inputs;  // input of each layer
  std::vector<std::vector<std::uint32_t>> argmax;  // per layer; pools only
  bool valid = false;
};

template <typename T>
using Gradients = std::vector<BasicTensor<T>>;

/// Materialized network: weight and bias tensors of each Conv2d/Linear layer
/// in declaration order, plus momentum buffers of identical shape.
template <typename T>
class Model {
 public:
  explicit Model(ModelConfig config);

  const ModelConfig& config() const { return config_; }
  const std::vector<LayerSpec>& layers() const { return layers_; }

  std::vector<BasicTensor<T>>& parameters() { return params_; }
  const std::vector<BasicTensor<T>>& parameters() const { return params_; }
  std::vector<BasicTensor<T>>& velocity() { return velocity_; }
  const std::vector<BasicTensor<T>>& velocity() const { return velocity_; }

  std::size_t parameter_count() const;

  /// Inference forward pass over [N, C, H, W]; returns [N, num_classes].
  BasicTensor<T> forward(const BasicTensor<T>& batch) const;
  /// Forward pass that records what backward needs in `cache`.
  BasicTensor<T> forward(const BasicTensor<T>& batch,
                         ForwardCache<T>& cache) const;

  /// Gradients for every parameter tensor, in parameters() order. Throws
  /// UsageError if `cache` does not hold a forward pass.
  Gradients<T> backward(const ForwardCache<T>& cache,
                        const BasicTensor<T>& dlogits) const;

  template <typename U>
  Model<U> cast() const {
    Model<U> out(config_);
    for (std::size_t i = 0; i < params_.size(); ++i) {
      out.parameters()[i] = params_[i].template cast<U>();
      out.velocity()[i] = velocity_[i].template cast<U>();
    }
    return out;
  }

 private:
  BasicTensor<T> run(const BasicTensor<T>& batch, ForwardCache<T>* cache) const;

  ModelConfig config_;
  std::vector<LayerSpec> layers_;
  std::vector<BasicTensor<T>> params_;
  std::vector<BasicTensor<T>> velocity_;
};

/// Uniform(+-sqrt(6 / fan_in)) weights, zero biases, zero velocity. The
/// draws are made in double, so float and double models built from the
/// same seed agree up to rounding.
template <typename T>
Model<T> build_model(const ModelConfig& config, std::uint64_t seed);

/// Classical momentum: v <- momentum * v + g; p <- p - lr * v.
template <typename T>
void sgd_momentum_step(Model<T>& model, const Gradients<T>& grads, double lr,
                       double momentum);

}  // namespace uamqa
