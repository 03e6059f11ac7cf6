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
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uamqa/dataset.hpp"
#include "uamqa/metrics.hpp"
#include "uamqa/model.hpp"

namespace uamqa {

struct TrainConfig {
  double lr = 0.01;
  double momentum = 0.9;
  std::size_t batch_size = 16;
  std::size_t epochs = 50;
  std::uint64_t seed = 0;
  std::string precision = "f32";
  ScenarioId scenario = ScenarioId::Model4;

  /// Same as the defaults but with lr 0.001.
  static TrainConfig text_preset();

  void validate() const;
  nlohmann::json to_json() const;
};

struct EpochRecord {
  std::size_t epoch = 0;       // 1-based
  double train_loss = 0.0;     // mean over the epoch's batches
  double test_accuracy = 0.0;
  double seconds = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;

  /// epoch,train_loss,test_accuracy,seconds. Wall-clock time varies between
  /// runs, so it is written as 0 unless `include_time` is set.
  std::string to_csv(bool include_time = false) const;
};

/// Called after every epoch; returning false stops training early.
using EpochCallback = std::function<bool(const EpochRecord&)>;

/// Seeds derived from one run seed.
struct RunSeeds {
  std::uint64_t data = 0;     // balance uses data, split uses data + 1
  std::uint64_t init = 0;
  std::uint64_t shuffle = 0;

  static RunSeeds from(std::uint64_t seed) { return {seed, seed + 2, seed + 3}; }
};

/// Index of the largest logit in each row; ties go to the lowest index.
std::vector<ClassIndex> predict(const Tensor& logits);

/// Confusion counts of `model` over `dataset`, in fixed-size batches.
ConfusionMatrix evaluate(const Model<float>& model, const LabeledDataset& dataset,
                         std::size_t batch_size = 32);

/// Mini-batch SGD with momentum on softmax cross-entropy. The test set is
/// scored after every epoch. Throws NumericError on a non-finite batch loss.
TrainHistory train(Model<float>& model, const LabeledDataset& train_set,
                   const LabeledDataset& test_set, const TrainConfig& config,
                   std::uint64_t shuffle_seed, const EpochCallback& on_epoch = {});

struct ScenarioRun {
  DataConfig data;
  TrainConfig train;
  /// Artifacts go here when set: model.uamc, history.csv, confusion.csv,
  /// summary.json, dataset_summary.json.
  std::filesystem::path out_dir;
  bool record_time = false;
  EpochCallback on_epoch;
};

struct ScenarioReport {
  nlohmann::json summary;
  ConfusionMatrix confusion{1};
  TrainHistory history;
  nlohmann::json dataset_summary;
  Model<float> model{ModelConfig{}};
};

/// Balances, splits, trains and evaluates one scenario on an already
/// labeled dataset. Seeds come from run.train.seed via RunSeeds.
ScenarioReport run_scenario(const LabeledDataset& all, const ScenarioRun& run);

/// Loads `dataset_dir` for the run's scenario, then as above.
ScenarioReport run_scenario(const std::filesystem::path& dataset_dir,
                            const ScenarioRun& run);

inline constexpr char kCheckpointFile[] = "model.uamc";
inline constexpr char kHistoryFile[] = "history.csv";
inline constexpr char kConfusionFile[] = "confusion.csv";
inline constexpr char kSummaryFile[] = "summary.json";
inline constexpr char kDatasetSummaryFile[] = "dataset_summary.json";

}  // namespace uamqa
