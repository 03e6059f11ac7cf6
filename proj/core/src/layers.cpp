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

#include "uamqa/layers.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

namespace uamqa {

std::string to_string(LayerKind kind) {
  switch (kind) {
    case LayerKind::Conv2d:
      return "Conv2d";
    case LayerKind::ReLU:
      return "ReLU";
    case LayerKind::MaxPool2d:
      return "MaxPool2d";
    case LayerKind::Flatten:
      return "Flatten";
    case LayerKind::Linear:
      return "Linear";
  }
  return "?";
}

LayerKind layer_kind_from_string(const std::string& name) {
  for (const LayerKind k : {LayerKind::Conv2d, LayerKind::ReLU,
                            LayerKind::MaxPool2d, LayerKind::Flatten,
                            LayerKind::Linear}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown layer kind '" + name + "'");
}

LayerSpec LayerSpec::conv2d(int in_channels, int out_channels) {
  return {LayerKind::Conv2d, 3, 1, 1, 1, in_channels, out_channels};
}
LayerSpec LayerSpec::relu() { return {LayerKind::ReLU}; }
LayerSpec LayerSpec::maxpool2d() {
  return {LayerKind::MaxPool2d, 2, 2, 0, 1, 0, 0};
}
LayerSpec LayerSpec::flatten() { return {LayerKind::Flatten}; }
LayerSpec LayerSpec::linear(int in_features, int out_features) {
  return {LayerKind::Linear, 0, 0, 0, 0, in_features, out_features};
}

namespace {

constexpr std::size_t kConvChannelBlock = 8;
constexpr std::size_t kLinearTile = 1024;

void check_conv_spec(const LayerSpec& spec) {
  if (spec.kind != LayerKind::Conv2d) {
    throw UsageError("conv2d called with a " + to_string(spec.kind) +
                     " layer spec");
  }
  if (spec.stride != 1 || spec.dilation != 1) {
    throw UsageError("conv2d supports stride 1 and dilation 1 only, got stride " +
                     std::to_string(spec.stride) + " dilation " +
                     std::to_string(spec.dilation));
  }
  if (spec.kernel_size < 1 || spec.padding < 0 ||
      spec.padding >= spec.kernel_size) {
    throw UsageError("conv2d kernel_size " + std::to_string(spec.kernel_size) +
                     " with padding " + std::to_string(spec.padding) +
                     " is not supported");
  }
}

// Copies a [c, h, w] block into a zero-bordered [c, h + 2p, w + 2p] buffer.
template <typename T>
void pad_planes(const T* in, std::size_t c, std::size_t h, std::size_t w,
                std::size_t pad, std::vector<T>& out) {
  const std::size_t hp = h + 2 * pad;
  const std::size_t wp = w + 2 * pad;
  out.assign(c * hp * wp, T{0});
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t y = 0; y < h; ++y) {
      std::memcpy(&out[(ch * hp + y + pad) * wp + pad], in + (ch * h + y) * w,
                  w * sizeof(T));
    }
  }
}

// One SIMD register of T; unaligned loads and stores go through memcpy.
template <typename T>
struct Simd {
  typedef T Vec __attribute__((vector_size(64)));
  static constexpr std::size_t kWidth = 64 / sizeof(T);
  static Vec load(const T* p) {
    Vec v;
    std::memcpy(&v, p, sizeof(Vec));
    return v;
  }
  static void store(T* p, Vec v) { std::memcpy(p, &v, sizeof(Vec)); }
  static Vec splat(T x) { return Vec{} + x; }
};

// Register tile: CB output channels x NV vectors along x.
template <typename T, std::size_t CB, std::size_t NV>
inline void conv_tile(const T* padded, std::size_t cin, std::size_t hp,
                      std::size_t wp, const T* wt, const T* bias,
                      std::size_t cout, std::size_t k, std::size_t co0,
                      std::size_t y, std::size_t x0, std::size_t ho,
                      std::size_t wo, T* out) {
  using S = Simd<T>;
  using V = typename S::Vec;
  constexpr std::size_t W = S::kWidth;
  V acc[CB][NV];
  for (std::size_t c = 0; c < CB; ++c) {
    for (std::size_t v = 0; v < NV; ++v) acc[c][v] = V{};
  }
  for (std::size_t ci = 0; ci < cin; ++ci) {
    for (std::size_t ky = 0; ky < k; ++ky) {
      const T* row = padded + (ci * hp + y + ky) * wp + x0;
      const T* wrow = wt + ((ci * k + ky) * k) * cout + co0;
      for (std::size_t kx = 0; kx < k; ++kx) {
        V r[NV];
        for (std::size_t v = 0; v < NV; ++v) r[v] = S::load(row + kx + v * W);
        const T* wv = wrow + kx * cout;
        for (std::size_t c = 0; c < CB; ++c) {
          const V wc = S::splat(wv[c]);
          for (std::size_t v = 0; v < NV; ++v) acc[c][v] += wc * r[v];
        }
      }
    }
  }
  for (std::size_t c = 0; c < CB; ++c) {
    const V b = S::splat(bias ? bias[co0 + c] : T{0});
    T* o = out + ((co0 + c) * ho + y) * wo + x0;
    for (std::size_t v = 0; v < NV; ++v) S::store(o + v * W, acc[c][v] + b);
  }
}

// Single-sample convolution over a pre-padded input.
//   padded:  [cin, hp, wp]
//   wt:      [cin, k, k, cout]  (output channel fastest)
//   out:     [cout, hp - k + 1, wp - k + 1]
// Every output is sum_{ci, ky, kx} in that order, then + bias.
template <typename T>
void conv_padded(const T* padded, std::size_t cin, std::size_t hp,
                 std::size_t wp, const T* wt, const T* bias, std::size_t cout,
                 std::size_t k, T* out) {
  constexpr std::size_t CB = kConvChannelBlock;
  constexpr std::size_t W = Simd<T>::kWidth;
  const std::size_t ho = hp - k + 1;
  const std::size_t wo = wp - k + 1;

  for (std::size_t co0 = 0; co0 < cout; co0 += CB) {
    const std::size_t cb = std::min(CB, cout - co0);
    for (std::size_t y = 0; y < ho; ++y) {
      std::size_t x0 = 0;
      if (cb == CB) {
        for (; x0 + 2 * W <= wo; x0 += 2 * W) {
          conv_tile<T, CB, 2>(padded, cin, hp, wp, wt, bias, cout, k, co0, y,
                              x0, ho, wo, out);
        }
        for (; x0 + W <= wo; x0 += W) {
          conv_tile<T, CB, 1>(padded, cin, hp, wp, wt, bias, cout, k, co0, y,
                              x0, ho, wo, out);
        }
      }
      for (std::size_t x = x0; x < wo; ++x) {
        for (std::size_t c = 0; c < cb; ++c) {
          T s{0};
          for (std::size_t ci = 0; ci < cin; ++ci) {
            for (std::size_t ky = 0; ky < k; ++ky) {
              const T* row = padded + (ci * hp + y + ky) * wp + x;
              for (std::size_t kx = 0; kx < k; ++kx) {
                s += wt[((ci * k + ky) * k + kx) * cout + co0 + c] * row[kx];
              }
            }
          }
          out[((co0 + c) * ho + y) * wo + x] = s + (bias ? bias[co0 + c] : T{0});
        }
      }
    }
  }
}

// Single-sample weight gradient, written to dw [cout, cin, k, k] and
// db [cout]:  dw[co][ci][ky][kx] = sum_{y, x} g[co][y][x] * padded[ci][y+ky][x+kx].
template <typename T>
void conv_weight_grad(const T* padded, std::size_t cin, std::size_t hp,
                      std::size_t wp, const T* grad, std::size_t cout,
                      std::size_t k, T* dw, T* db) {
  const std::size_t ho = hp - k + 1;
  const std::size_t wo = wp - k + 1;
  const std::size_t plane = ho * wo;

  for (std::size_t co = 0; co < cout; ++co) {
    const T* g = grad + co * plane;
    T s{0};
    for (std::size_t i = 0; i < plane; ++i) s += g[i];
    db[co] = s;
  }

  if (k == 3) {
    using S = Simd<T>;
    using V = typename S::Vec;
    constexpr std::size_t W = S::kWidth;
    constexpr std::size_t KK = 9;
    constexpr std::size_t CB = 2;
    const std::size_t wfull = wo - wo % W;
    for (std::size_t co0 = 0; co0 < cout; co0 += CB) {
      const std::size_t cb = std::min(CB, cout - co0);
      for (std::size_t ci = 0; ci < cin; ++ci) {
        V acc[CB][KK];
        T tail[CB][KK] = {};
        for (std::size_t c = 0; c < CB; ++c) {
          for (std::size_t t = 0; t < KK; ++t) acc[c][t] = V{};
        }
        for (std::size_t y = 0; y < ho; ++y) {
          const T* r0 = padded + (ci * hp + y) * wp;
          if (cb == CB) {
            for (std::size_t x0 = 0; x0 < wfull; x0 += W) {
              V gv[CB];
              for (std::size_t c = 0; c < CB; ++c) {
                gv[c] = S::load(grad + ((co0 + c) * ho + y) * wo + x0);
              }
              for (std::size_t t = 0; t < KK; ++t) {
                const V r = S::load(r0 + (t / 3) * wp + x0 + t % 3);
                for (std::size_t c = 0; c < CB; ++c) acc[c][t] += gv[c] * r;
              }
            }
          }
          const std::size_t xs = cb == CB ? wfull : 0;
          for (std::size_t x = xs; x < wo; ++x) {
            for (std::size_t c = 0; c < cb; ++c) {
              const T gx = grad[((co0 + c) * ho + y) * wo + x];
              for (std::size_t t = 0; t < KK; ++t) {
                tail[c][t] += gx * r0[(t / 3) * wp + x + t % 3];
              }
            }
          }
        }
        for (std::size_t c = 0; c < cb; ++c) {
          for (std::size_t t = 0; t < KK; ++t) {
            T s{0};
            for (std::size_t l = 0; l < W; ++l) s += acc[c][t][l];
            dw[((co0 + c) * cin + ci) * KK + t] = s + tail[c][t];
          }
        }
      }
    }
    return;
  }

  for (std::size_t co = 0; co < cout; ++co) {
    const T* g = grad + co * plane;
    for (std::size_t ci = 0; ci < cin; ++ci) {
      for (std::size_t ky = 0; ky < k; ++ky) {
        for (std::size_t kx = 0; kx < k; ++kx) {
          T s{0};
          for (std::size_t y = 0; y < ho; ++y) {
            const T* r = padded + (ci * hp + y + ky) * wp + kx;
            for (std::size_t x = 0; x < wo; ++x) s += g[y * wo + x] * r[x];
          }
          dw[((co * cin + ci) * k + ky) * k + kx] = s;
        }
      }
    }
  }
}

}  // namespace

template <typename T>
BasicTensor<T> conv2d_forward(const BasicTensor<T>& input,
                              const BasicTensor<T>& weights,
                              const BasicTensor<T>& bias,
                              const LayerSpec& spec) {
  check_conv_spec(spec);
  require_rank(input, 4, "conv2d input");
  require_rank(weights, 4, "conv2d weights");
  const std::size_t n = input.dim(0), cin = input.dim(1), h = input.dim(2),
                    w = input.dim(3);
  const std::size_t cout = weights.dim(0);
  const std::size_t k = static_cast<std::size_t>(spec.kernel_size);
  const std::size_t pad = static_cast<std::size_t>(spec.padding);
  if (weights.dim(1) != cin || weights.dim(2) != k || weights.dim(3) != k) {
    throw ShapeError("conv2d input " + shape_string(input.shape()) +
                     " is incompatible with weights " +
                     shape_string(weights.shape()));
  }
  if (bias.size() != cout) {
    throw ShapeError("conv2d bias " + shape_string(bias.shape()) +
                     " does not match weights " +
                     shape_string(weights.shape()));
  }
  if (h + 2 * pad < k || w + 2 * pad < k) {
    throw ShapeError("conv2d input " + shape_string(input.shape()) +
                     " is smaller than the kernel");
  }
  const std::size_t hp = h + 2 * pad, wp = w + 2 * pad;
  const std::size_t ho = hp - k + 1, wo = wp - k + 1;

  // [cin][ky][kx][cout]
  std::vector<T> wt(cin * k * k * cout);
  for (std::size_t co = 0; co < cout; ++co) {
    for (std::size_t r = 0; r < cin * k * k; ++r) {
      wt[r * cout + co] = weights[co * cin * k * k + r];
    }
  }

  BasicTensor<T> out({n, cout, ho, wo});
  const long long count = static_cast<long long>(n);
#pragma omp parallel
  {
    std::vector<T> padded;
#pragma omp for schedule(static)
    for (long long s = 0; s < count; ++s) {
      const auto i = static_cast<std::size_t>(s);
      pad_planes(input.raw() + i * cin * h * w, cin, h, w, pad, padded);
      conv_padded(padded.data(), cin, hp, wp, wt.data(), bias.raw(), cout, k,
                  out.raw() + i * cout * ho * wo);
    }
  }
  return out;
}

template <typename T>
Conv2dGrads<T> conv2d_backward(const BasicTensor<T>& input,
                               const BasicTensor<T>& weights,
                               const BasicTensor<T>& grad_output,
                               const LayerSpec& spec, bool need_input_grad) {
  check_conv_spec(spec);
  require_rank(input, 4, "conv2d_backward input");
  require_rank(grad_output, 4, "conv2d_backward grad_output");
  const std::size_t n = input.dim(0), cin = input.dim(1), h = input.dim(2),
                    w = input.dim(3);
  const std::size_t cout = weights.dim(0);
  const std::size_t k = static_cast<std::size_t>(spec.kernel_size);
  const std::size_t pad = static_cast<std::size_t>(spec.padding);
  const std::size_t hp = h + 2 * pad, wp = w + 2 * pad;
  const std::size_t ho = hp - k + 1, wo = wp - k + 1;
  if (weights.dim(1) != cin ||
      grad_output.shape() != Shape{n, cout, ho, wo}) {
    throw ShapeError("conv2d_backward: input " + shape_string(input.shape()) +
                     ", weights " + shape_string(weights.shape()) +
                     ", grad_output " + shape_string(grad_output.shape()) +
                     " are inconsistent");
  }

  const std::size_t wsize = cout * cin * k * k;
  // Per-sample partials, reduced in sample order below.
  std::vector<T> dw_parts(n * wsize);
  std::vector<T> db_parts(n * cout);

  // Input gradient is the convolution of grad_output (padded by k-1-p) with
  // the spatially flipped kernel, input and output channels swapped.
  const std::size_t back_pad = k - 1 - pad;
  std::vector<T> wflip;
  Conv2dGrads<T> grads;
  if (need_input_grad) {
    // [cout][ky][kx][cin]
    wflip.resize(wsize);
    for (std::size_t co = 0; co < cout; ++co) {
      for (std::size_t ci = 0; ci < cin; ++ci) {
        for (std::size_t ky = 0; ky < k; ++ky) {
          for (std::size_t kx = 0; kx < k; ++kx) {
            wflip[((co * k + ky) * k + kx) * cin + ci] =
                weights[((co * cin + ci) * k + (k - 1 - ky)) * k + (k - 1 - kx)];
          }
        }
      }
    }
    grads.input = BasicTensor<T>(input.shape());
  }

  const long long count = static_cast<long long>(n);
#pragma omp parallel
  {
    std::vector<T> padded;
    std::vector<T> gpadded;
#pragma omp for schedule(static)
    for (long long s = 0; s < count; ++s) {
      const auto i = static_cast<std::size_t>(s);
      const T* g = grad_output.raw() + i * cout * ho * wo;
      pad_planes(input.raw() + i * cin * h * w, cin, h, w, pad, padded);
      conv_weight_grad(padded.data(), cin, hp, wp, g, cout, k,
                       dw_parts.data() + i * wsize, db_parts.data() + i * cout);
      if (need_input_grad) {
        pad_planes(g, cout, ho, wo, back_pad, gpadded);
        conv_padded<T>(gpadded.data(), cout, ho + 2 * back_pad,
                       wo + 2 * back_pad, wflip.data(), nullptr, cin, k,
                       grads.input.raw() + i * cin * h * w);
      }
    }
  }

  grads.weights = BasicTensor<T>(weights.shape());
  grads.bias = BasicTensor<T>({cout});
  for (std::size_t i = 0; i < n; ++i) {
    const T* part = dw_parts.data() + i * wsize;
    for (std::size_t j = 0; j < wsize; ++j) grads.weights[j] += part[j];
    for (std::size_t co = 0; co < cout; ++co) {
      grads.bias[co] += db_parts[i * cout + co];
    }
  }
  return grads;
}

template <typename T>
MaxPoolResult<T> maxpool2d_forward(const BasicTensor<T>& input) {
  require_rank(input, 4, "maxpool2d input");
  const std::size_t n = input.dim(0), c = input.dim(1), h = input.dim(2),
                    w = input.dim(3);
  if (h % 2 != 0 || w % 2 != 0) {
    throw ShapeError("maxpool2d needs even spatial dims, got " +
                     shape_string(input.shape()) +
                     "; crop the input to an even size first");
  }
  if (input.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw ShapeError("maxpool2d input too large for 32-bit argmax indices");
  }
  const std::size_t ho = h / 2, wo = w / 2;
  MaxPoolResult<T> res{BasicTensor<T>({n, c, ho, wo}), {}};
  res.argmax.resize(n * c * ho * wo);
  const long long planes = static_cast<long long>(n * c);
#pragma omp parallel for schedule(static)
  for (long long p = 0; p < planes; ++p) {
    const std::size_t base = static_cast<std::size_t>(p) * h * w;
    const std::size_t obase = static_cast<std::size_t>(p) * ho * wo;
    for (std::size_t y = 0; y < ho; ++y) {
      for (std::size_t x = 0; x < wo; ++x) {
        std::size_t best = base + (2 * y) * w + 2 * x;
        for (const std::size_t idx :
             {best + 1, best + w, best + w + 1}) {
          if (input[idx] > input[best]) best = idx;
        }
        res.output[obase + y * wo + x] = input[best];
        res.argmax[obase + y * wo + x] = static_cast<std::uint32_t>(best);
      }
    }
  }
  return res;
}

template <typename T>
BasicTensor<T> maxpool2d_backward(const BasicTensor<T>& grad_output,
                                  const std::vector<std::uint32_t>& argmax,
                                  const Shape& input_shape) {
  if (argmax.size() != grad_output.size()) {
    throw ShapeError("maxpool2d_backward: " + std::to_string(argmax.size()) +
                     " argmax entries for grad_output " +
                     shape_string(grad_output.shape()));
  }
  BasicTensor<T> grad(input_shape);
  // Windows are disjoint, so each input receives at most one contribution.
  for (std::size_t i = 0; i < argmax.size(); ++i) {
    grad[argmax[i]] += grad_output[i];
  }
  return grad;
}

template <typename T>
BasicTensor<T> relu(const BasicTensor<T>& input) {
  BasicTensor<T> out = input;
  for (T& v : out.data()) v = v > T{0} ? v : T{0};
  return out;
}

template <typename T>
BasicTensor<T> relu_backward(const BasicTensor<T>& grad_output,
                             const BasicTensor<T>& input) {
  if (grad_output.shape() != input.shape()) {
    throw ShapeError("relu_backward: grad " +
                     shape_string(grad_output.shape()) + " vs input " +
                     shape_string(input.shape()));
  }
  BasicTensor<T> grad(input.shape());
  for (std::size_t i = 0; i < input.size(); ++i) {
    grad[i] = input[i] > T{0} ? grad_output[i] : T{0};
  }
  return grad;
}

template <typename T>
BasicTensor<T> linear_forward(const BasicTensor<T>& input,
                              const BasicTensor<T>& weights,
                              const BasicTensor<T>& bias) {
  require_rank(input, 2, "linear input");
  require_rank(weights, 2, "linear weights");
  const std::size_t n = input.dim(0), fin = input.dim(1),
                    fout = weights.dim(0);
  if (weights.dim(1) != fin || bias.size() != fout) {
    throw ShapeError("linear input " + shape_string(input.shape()) +
                     " is incompatible with weights " +
                     shape_string(weights.shape()) + " and bias " +
                     shape_string(bias.shape()));
  }
  using S = Simd<T>;
  using V = typename S::Vec;
  constexpr std::size_t W = S::kWidth;
  constexpr std::size_t NB = 8;
  const std::size_t full = fin - fin % W;
  // Lane l of (sample, output) accumulates indices i = l (mod W) in
  // increasing order; lanes, then the scalar tail, are reduced left to right.
  std::vector<V> lanes(n * fout, V{});
  const long long outs = static_cast<long long>(fout);
  const T* x = input.raw();

#pragma omp parallel
  for (std::size_t i0 = 0; i0 < full; i0 += kLinearTile) {
    const std::size_t i1 = std::min(i0 + kLinearTile, full);
#pragma omp for schedule(static)
    for (long long so = 0; so < outs; ++so) {
      const auto o = static_cast<std::size_t>(so);
      const T* wrow = weights.raw() + o * fin;
      for (std::size_t s0 = 0; s0 < n; s0 += NB) {
        const std::size_t nb = std::min(NB, n - s0);
        V acc[NB];
        for (std::size_t j = 0; j < nb; ++j) acc[j] = lanes[(s0 + j) * fout + o];
        if (nb == NB) {
          for (std::size_t i = i0; i < i1; i += W) {
            const V wv = S::load(wrow + i);
            for (std::size_t j = 0; j < NB; ++j) {
              acc[j] += wv * S::load(x + (s0 + j) * fin + i);
            }
          }
        } else {
          for (std::size_t i = i0; i < i1; i += W) {
            const V wv = S::load(wrow + i);
            for (std::size_t j = 0; j < nb; ++j) {
              acc[j] += wv * S::load(x + (s0 + j) * fin + i);
            }
          }
        }
        for (std::size_t j = 0; j < nb; ++j) lanes[(s0 + j) * fout + o] = acc[j];
      }
    }
  }

  BasicTensor<T> out({n, fout});
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t o = 0; o < fout; ++o) {
      const V& l = lanes[s * fout + o];
      T acc{0};
      for (std::size_t j = 0; j < W; ++j) acc += l[j];
      for (std::size_t i = full; i < fin; ++i) {
        acc += x[s * fin + i] * weights[o * fin + i];
      }
      out[s * fout + o] = acc + bias[o];
    }
  }
  return out;
}

template <typename T>
LinearGrads<T> linear_backward(const BasicTensor<T>& input,
                               const BasicTensor<T>& weights,
                               const BasicTensor<T>& grad_output) {
  require_rank(input, 2, "linear_backward input");
  require_rank(grad_output, 2, "linear_backward grad_output");
  const std::size_t n = input.dim(0), fin = input.dim(1),
                    fout = weights.dim(0);
  if (weights.shape() != Shape{fout, fin} ||
      grad_output.shape() != Shape{n, fout}) {
    throw ShapeError("linear_backward: input " + shape_string(input.shape()) +
                     ", weights " + shape_string(weights.shape()) +
                     ", grad_output " + shape_string(grad_output.shape()) +
                     " are inconsistent");
  }
  using S = Simd<T>;
  using V = typename S::Vec;
  constexpr std::size_t W = S::kWidth;
  constexpr std::size_t SB = 4;

  LinearGrads<T> g{BasicTensor<T>(input.shape()),
                   BasicTensor<T>(weights.shape()), BasicTensor<T>({fout})};
  const T* x = input.raw();
  const T* w = weights.raw();
  const T* go = grad_output.raw();
  T* dx = g.input.raw();
  T* dw = g.weights.raw();
  const std::size_t full = fin - fin % W;

  for (std::size_t o = 0; o < fout; ++o) {
    T s{0};
    for (std::size_t i = 0; i < n; ++i) s += go[i * fout + o];
    g.bias[o] = s;
  }

  const long long outs = static_cast<long long>(fout);
  const long long sblocks = static_cast<long long>((n + SB - 1) / SB);
#pragma omp parallel
  for (std::size_t i0 = 0; i0 < fin; i0 += kLinearTile) {
    const std::size_t i1 = std::min(i0 + kLinearTile, fin);
    const std::size_t v1 = std::min(i1, full);
    // dW[o][i] = sum_s g[s][o] * x[s][i], samples in order.
#pragma omp for schedule(static) nowait
    for (long long so = 0; so < outs; ++so) {
      const auto o = static_cast<std::size_t>(so);
      T* row = dw + o * fin;
      for (std::size_t i = i0; i < v1; i += W) {
        V acc{};
        for (std::size_t s = 0; s < n; ++s) {
          acc += S::splat(go[s * fout + o]) * S::load(x + s * fin + i);
        }
        S::store(row + i, acc);
      }
      for (std::size_t i = v1; i < i1; ++i) {
        T acc{0};
        for (std::size_t s = 0; s < n; ++s) acc += go[s * fout + o] * x[s * fin + i];
        row[i] = acc;
      }
    }
    // dx[s][i] = sum_o g[s][o] * W[o][i], outputs in order.
#pragma omp for schedule(static)
    for (long long sb = 0; sb < sblocks; ++sb) {
      const std::size_t s0 = static_cast<std::size_t>(sb) * SB;
      const std::size_t nb = std::min(SB, n - s0);
      for (std::size_t i = i0; i < v1; i += W) {
        V acc[SB] = {};
        for (std::size_t o = 0; o < fout; ++o) {
          const V wv = S::load(w + o * fin + i);
          for (std::size_t j = 0; j < nb; ++j) {
            acc[j] += S::splat(go[(s0 + j) * fout + o]) * wv;
          }
        }
        for (std::size_t j = 0; j < nb; ++j) S::store(dx + (s0 + j) * fin + i, acc[j]);
      }
      for (std::size_t i = v1; i < i1; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
          T acc{0};
          for (std::size_t o = 0; o < fout; ++o) {
            acc += go[(s0 + j) * fout + o] * w[o * fin + i];
          }
          dx[(s0 + j) * fin + i] = acc;
        }
      }
    }
  }
  return g;
}

#define UAMQA_INSTANTIATE_LAYERS(T)                                           \
  template BasicTensor<T> conv2d_forward(const BasicTensor<T>&,               \
                                         const BasicTensor<T>&,               \
                                         const BasicTensor<T>&,               \
                                         const LayerSpec&);                   \
  template Conv2dGrads<T> conv2d_backward(                                    \
      const BasicTensor<T>&, const BasicTensor<T>&, const BasicTensor<T>&,    \
      const LayerSpec&, bool);                                                \
  template MaxPoolResult<T> maxpool2d_forward(const BasicTensor<T>&);         \
  template BasicTensor<T> maxpool2d_backward(                                 \
      const BasicTensor<T>&, const std::vector<std::uint32_t>&, const Shape&); \
  template BasicTensor<T> relu(const BasicTensor<T>&);                        \
  template BasicTensor<T> relu_backward(const BasicTensor<T>&,                \
                                        const BasicTensor<T>&);               \
  template BasicTensor<T> linear_forward(const BasicTensor<T>&,               \
                                         const BasicTensor<T>&,               \
                                         const BasicTensor<T>&);              \
  template LinearGrads<T> linear_backward(                                    \
      const BasicTensor<T>&, const BasicTensor<T>&, const BasicTensor<T>&);

UAMQA_INSTANTIATE_LAYERS(float)
UAMQA_INSTANTIATE_LAYERS(double)

#undef UAMQA_INSTANTIATE_LAYERS

}  // namespace uamqa
