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

#include <benchmark/benchmark.h>

#include <random>

#include "uamqa/layers.hpp"
#include "uamqa/model.hpp"
#include "uamqa/pca.hpp"
#include "uamqa/synthgen.hpp"

namespace uamqa {
namespace {

Tensor uniform(Shape shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> d(-1.0f, 1.0f);
  Tensor t(std::move(shape));
  for (float& v : t.data()) v = d(rng);
  return t;
}

// Conv layer of the 160x160 network; range(0) picks the first or second.
void BM_ConvForward(benchmark::State& state) {
  const auto layers = ModelConfig::standard(10).layers();
  const LayerSpec& spec = state.range(0) == 1 ? layers[0] : layers[3];
  const std::size_t extent = state.range(0) == 1 ? 160 : 80;
  const auto cin = static_cast<std::size_t>(spec.in_channels);
  const auto cout = static_cast<std::size_t>(spec.out_channels);
  const Tensor x = uniform({16, cin, extent, extent}, 1);
  const Tensor w = uniform({cout, cin, 3, 3}, 2);
  const Tensor b = uniform({cout}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(conv2d_forward(x, w, b, spec));
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_ConvForward)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_ConvBackward(benchmark::State& state) {
  const LayerSpec spec = ModelConfig::standard(10).layers()[3];
  const Tensor x = uniform({16, 32, 80, 80}, 1);
  const Tensor w = uniform({64, 32, 3, 3}, 2);
  const Tensor g = uniform({16, 64, 80, 80}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(conv2d_backward(x, w, g, spec, true));
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_ConvBackward)->Unit(benchmark::kMillisecond);

// The 102,400 -> 128 dense layer.
void BM_LinearForward(benchmark::State& state) {
  const Tensor x = uniform({16, 102400}, 1);
  const Tensor w = uniform({128, 102400}, 2);
  const Tensor b = uniform({128}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(linear_forward(x, w, b));
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_LinearForward)->Unit(benchmark::kMillisecond);

void BM_LinearBackward(benchmark::State& state) {
  const Tensor x = uniform({16, 102400}, 1);
  const Tensor w = uniform({128, 102400}, 2);
  const Tensor g = uniform({16, 128}, 3);
  for (auto _ : state) benchmark::DoNotOptimize(linear_backward(x, w, g));
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_LinearBackward)->Unit(benchmark::kMillisecond);

void BM_PcaDenoise(benchmark::State& state) {
  ClipSpec s = ClipSpec::desk();
  s.n_frames = static_cast<std::size_t>(state.range(0));
  s.seed = 4;
  const VideoClip clip = generate_clip(s).clip;
  const PcaConfig c;
  for (auto _ : state) benchmark::DoNotOptimize(pca_denoise(clip, c));
}
BENCHMARK(BM_PcaDenoise)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace uamqa
