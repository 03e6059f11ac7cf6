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

#include "uamqa/model.hpp"

#include <cmath>
#include <random>

namespace uamqa {

ModelConfig ModelConfig::standard(std::size_t num_classes) {
  ModelConfig c;
  c.num_classes = num_classes;
  return c;
}

ModelConfig ModelConfig::miniature(std::size_t num_classes) {
  ModelConfig c;
  c.input_height = 16;
  c.input_width = 16;
  c.conv1_out = 4;
  c.conv2_out = 8;
  c.hidden_width = 8;
  c.num_classes = num_classes;
  return c;
}

std::vector<LayerSpec> ModelConfig::layers() const {
  if (input_channels == 0 || conv1_out == 0 || conv2_out == 0 ||
      hidden_width == 0 || num_classes == 0) {
    throw ConfigError("model widths must be positive");
  }
  // Same-padded convs keep the extent; each pool halves it.
  std::size_t h = input_height, w = input_width;
  for (int stage = 0; stage < 2; ++stage) {
    if (h == 0 || w == 0 || h % 2 != 0 || w % 2 != 0) {
      throw ShapeError("pooling stage " + std::to_string(stage + 1) +
                       " would see " + std::to_string(h) + "x" +
                       std::to_string(w) + "; input extents must be divisible by 4");
    }
    h /= 2;
    w /= 2;
  }
  const auto i = [](std::size_t v) { return static_cast<int>(v); };
  return {
      LayerSpec::conv2d(i(input_channels), i(conv1_out)),
      LayerSpec::relu(),
      LayerSpec::maxpool2d(),
      LayerSpec::conv2d(i(conv1_out), i(conv2_out)),
      LayerSpec::relu(),
      LayerSpec::maxpool2d(),
      LayerSpec::flatten(),
      LayerSpec::linear(i(flatten_width()), i(hidden_width)),
      LayerSpec::relu(),
      LayerSpec::linear(i(hidden_width), i(num_classes)),
  };
}

std::size_t ModelConfig::flatten_width() const {
  return conv2_out * (input_height / 4) * (input_width / 4);
}

std::size_t param_count(const ModelConfig& config) {
  std::size_t total = 0;
  for (const LayerSpec& l : config.layers()) {
    const auto in = static_cast<std::size_t>(l.in_channels);
    const auto out = static_cast<std::size_t>(l.out_channels);
    if (l.kind == LayerKind::Conv2d) {
      const auto k = static_cast<std::size_t>(l.kernel_size);
      total += (in * k * k + 1) * out;
    } else if (l.kind == LayerKind::Linear) {
      total += (in + 1) * out;
    }
  }
  return total;
}

template <typename T>
Model<T>::Model(ModelConfig config)
    : config_(config), layers_(config.layers()) {
  for (const LayerSpec& l : layers_) {
    const auto in = static_cast<std::size_t>(l.in_channels);
    const auto out = static_cast<std::size_t>(l.out_channels);
    if (l.kind == LayerKind::Conv2d) {
      const auto k = static_cast<std::size_t>(l.kernel_size);
      params_.emplace_back(Shape{out, in, k, k});
      params_.emplace_back(Shape{out});
    } else if (l.kind == LayerKind::Linear) {
      params_.emplace_back(Shape{out, in});
      params_.emplace_back(Shape{out});
    }
  }
  velocity_ = params_;
}

template <typename T>
std::size_t Model<T>::parameter_count() const {
  std::size_t total = 0;
  for (const auto& p : params_) total += p.size();
  return total;
}

template <typename T>
BasicTensor<T> Model<T>::forward(const BasicTensor<T>& batch) const {
  return run(batch, nullptr);
}

template <typename T>
BasicTensor<T> Model<T>::forward(const BasicTensor<T>& batch,
                                 ForwardCache<T>& cache) const {
  return run(batch, &cache);
}

template <typename T>
BasicTensor<T> Model<T>::run(const BasicTensor<T>& batch,
                             ForwardCache<T>* cache) const {
  const Shape expected = config_.input_shape();
  if (batch.rank() != 4 || Shape(batch.shape().begin() + 1,
                                 batch.shape().end()) != expected) {
    throw ShapeError("model expects input [N, " +
                     shape_string(expected).substr(1) + ", got " +
                     shape_string(batch.shape()));
  }
  if (cache) {
    cache->inputs.clear();
    cache->argmax.assign(layers_.size(), {});
    cache->valid = false;
  }

  BasicTensor<T> x = batch;
  std::size_t p = 0;
  for (std::size_t li = 0; li < layers_.size(); ++li) {
    const LayerSpec& l = layers_[li];
    BasicTensor<T> y;
    switch (l.kind) {
      case LayerKind::Conv2d:
        y = conv2d_forward(x, params_[p], params_[p + 1], l);
        p += 2;
        break;
      case LayerKind::Linear:
        y = linear_forward(x, params_[p], params_[p + 1]);
        p += 2;
        break;
      case LayerKind::ReLU:
        y = relu(x);
        break;
      case LayerKind::MaxPool2d: {
        auto r = maxpool2d_forward(x);
        y = std::move(r.output);
        if (cache) cache->argmax[li] = std::move(r.argmax);
        break;
      }
      case LayerKind::Flatten: {
        y = x;
        y.reshape({x.dim(0), x.size() / x.dim(0)});
        break;
      }
    }
    if (cache) cache->inputs.push_back(std::move(x));
    x = std::move(y);
  }
  if (cache) cache->valid = true;
  return x;
}

template <typename T>
Gradients<T> Model<T>::backward(const ForwardCache<T>& cache,
                                const BasicTensor<T>& dlogits) const {
  if (!cache.valid || cache.inputs.size() != layers_.size()) {
    throw UsageError("backward called without a cached forward pass");
  }
  const std::size_t batch = cache.inputs.front().dim(0);
  if (dlogits.shape() != Shape{batch, config_.num_classes}) {
    throw ShapeError("dlogits " + shape_string(dlogits.shape()) +
                     " does not match the cached batch of " +
                     std::to_string(batch));
  }

  Gradients<T> grads(params_.size());
  std::size_t p = params_.size();
  BasicTensor<T> g = dlogits;
  for (std::size_t li = layers_.size(); li-- > 0;) {
    const LayerSpec& l = layers_[li];
    const BasicTensor<T>& in = cache.inputs[li];
    switch (l.kind) {
      case LayerKind::Linear: {
        p -= 2;
        auto lg = linear_backward(in, params_[p], g);
        grads[p] = std::move(lg.weights);
        grads[p + 1] = std::move(lg.bias);
        g = std::move(lg.input);
        break;
      }
      case LayerKind::Conv2d: {
        p -= 2;
        const bool need_input = li > 0;
        auto cg = conv2d_backward(in, params_[p], g, l, need_input);
        grads[p] = std::move(cg.weights);
        grads[p + 1] = std::move(cg.bias);
        if (need_input) g = std::move(cg.input);
        break;
      }
      case LayerKind::ReLU:
        g = relu_backward(g, in);
        break;
      case LayerKind::MaxPool2d:
        g = maxpool2d_backward(g, cache.argmax[li], in.shape());
        break;
      case LayerKind::Flatten:
        g.reshape(in.shape());
        break;
    }
  }
  return grads;
}

template <typename T>
Model<T> build_model(const ModelConfig& config, std::uint64_t seed) {
  Model<T> model(config);
  std::mt19937_64 rng(seed);
  std::size_t p = 0;
  for (const LayerSpec& l : model.layers()) {
    if (!l.has_parameters()) continue;
    std::size_t fan_in = static_cast<std::size_t>(l.in_channels);
    if (l.kind == LayerKind::Conv2d) {
      fan_in *= static_cast<std::size_t>(l.kernel_size * l.kernel_size);
    }
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (T& v : model.parameters()[p].data()) v = static_cast<T>(dist(rng));
    p += 2;  // biases stay zero
  }
  return model;
}

template <typename T>
void sgd_momentum_step(Model<T>& model, const Gradients<T>& grads, double lr,
                       double momentum) {
  auto& params = model.parameters();
  auto& vel = model.velocity();
  if (grads.size() != params.size()) {
    throw ShapeError("sgd step: " + std::to_string(grads.size()) +
                     " gradient tensors for " + std::to_string(params.size()) +
                     " parameters");
  }
  const T mu = static_cast<T>(momentum);
  const T step = static_cast<T>(lr);
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (grads[i].shape() != params[i].shape()) {
      throw ShapeError("sgd step: gradient " + shape_string(grads[i].shape()) +
                       " does not match parameter " +
                       shape_string(params[i].shape()));
    }
    T* pv = params[i].raw();
    T* vv = vel[i].raw();
    const T* gv = grads[i].raw();
    const std::size_t n = params[i].size();
    for (std::size_t j = 0; j < n; ++j) {
      vv[j] = mu * vv[j] + gv[j];
      pv[j] -= step * vv[j];
    }
  }
}

template class Model<float>;
template class Model<double>;
template Model<float> build_model(const ModelConfig&, std::uint64_t);
template Model<double> build_model(const ModelConfig&, std::uint64_t);
template void sgd_momentum_step(Model<float>&, const Gradients<float>&, double,
                                double);
template void sgd_momentum_step(Model<double>&, const Gradients<double>&,
                                double, double);

}  // namespace uamqa
