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

#include "uamqa/loss.hpp"
#include "uamqa/model.hpp"

namespace uamqa {
namespace {

// One SGD step of the full network on a batch of 16 160x160 frames.
void BM_TrainStep(benchmark::State& state) {
  auto model = build_model<float>(ModelConfig::standard(10), 1);
  const Tensor x({16, 3, 160, 160}, 0.5f);
  std::vector<ClassIndex> labels(16);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<ClassIndex>(i % 10);
  for (auto _ : state) {
    ForwardCache<float> cache;
    const Tensor logits = model.forward(x, cache);
    const auto loss = softmax_cross_entropy(logits, labels);
    sgd_momentum_step(model, model.backward(cache, loss.dlogits), 0.001, 0.9);
  }
  state.SetItemsProcessed(state.iterations() * 16);
}
BENCHMARK(BM_TrainStep)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace uamqa

BENCHMARK_MAIN();
