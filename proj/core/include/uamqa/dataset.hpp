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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "uamqa/loss.hpp"
#include "uamqa/preprocess.hpp"
#include "uamqa/synthgen.hpp"
#include "uamqa/tensor.hpp"

namespace uamqa {

enum class ScenarioId { Model1, Model2, Model3, Model4 };

/// "model_1" ... "model_4".
std::string to_string(ScenarioId id);
ScenarioId scenario_from_string(const std::string& text);

/// Which clips a classifier sees and how they are labeled:
///   Model1  baseline vs thermocouple at 900 W (2 classes)
///   Model2  baseline prints by power (5 classes)
///   Model3  thermocouple prints by power (5 classes)
///   Model4  specimen x power, specimen-major, power ascending (10 classes)
struct Scenario {
  ScenarioId id = ScenarioId::Model4;
  /// Model1 only: pool every power level instead of 900 W alone.
  bool pool_all_powers = false;

  std::size_t num_classes() const;
  /// Class of a clip, or nullopt when the scenario excludes it.
  std::optional<ClassIndex> class_of(Specimen specimen, int power_w) const;
  std::vector<std::string> class_names() const;
};

struct LabeledClip {
  std::size_t manifest_index = 0;
  ClassIndex label = 0;
};

/// Labels every manifest record the scenario covers, in manifest order.
std::vector<LabeledClip> assign_labels(const std::vector<ClipManifest>& manifests,
                                       const Scenario& scenario);

struct Sample {
  std::shared_ptr<const Tensor> image;  // [C, H, W]
  ClassIndex label = 0;
  std::size_t clip = 0;  // source clip, for clip-level splitting
};

enum class SplitTag { All, Train, Test };
std::string to_string(SplitTag tag);

struct LabeledDataset {
  std::vector<Sample> items;
  std::vector<std::string> class_names;
  SplitTag tag = SplitTag::All;

  std::size_t size() const { return items.size(); }
  std::size_t num_classes() const { return class_names.size(); }
  std::vector<std::size_t> class_counts() const;
};

/// Downsamples every class, without replacement, to the smallest class
/// count. Retained items keep their original order. Throws DataError if a
/// class is empty.
LabeledDataset balance(const LabeledDataset& dataset, std::uint64_t seed);

enum class SplitLevel { Frame, Clip };
std::string to_string(SplitLevel level);
SplitLevel split_level_from_string(const std::string& text);

struct SplitResult {
  LabeledDataset train;
  LabeledDataset test;
};

/// Stratified split: per class, floor(ratio * count) shuffled items (or
/// clips, at SplitLevel::Clip) go to train and the rest to test.
SplitResult split(const LabeledDataset& dataset, double ratio,
                  std::uint64_t seed, SplitLevel level = SplitLevel::Frame);

struct Batch {
  Tensor images;  // [B, C, H, W]
  std::vector<ClassIndex> labels;
};

/// Shuffled index batches for one epoch. The permutation depends on
/// (shuffle_seed, epoch); the final short batch is kept.
std::vector<std::vector<std::size_t>> batch_indices(std::size_t count,
                                                    std::size_t batch_size,
                                                    std::uint64_t shuffle_seed,
                                                    std::size_t epoch);

Batch make_batch(const LabeledDataset& dataset,
                 std::span<const std::size_t> indices);

std::vector<Batch> batches(const LabeledDataset& dataset, std::size_t batch_size,
                           std::uint64_t shuffle_seed, std::size_t epoch);

/// Reads the manifest under `dir`, keeps the scenario's clips, runs the
/// preprocessing pipeline on each and labels every resulting frame.
LabeledDataset load_labeled_dataset(const std::filesystem::path& dir,
                                    const Scenario& scenario,
                                    const PipelineConfig& pipeline);

struct DataConfig {
  Scenario scenario;
  PipelineConfig pipeline;
  double train_ratio = 0.8;
  SplitLevel split_level = SplitLevel::Frame;
  bool balance = true;
  std::uint64_t seed = 0;
};

struct PreparedData {
  LabeledDataset train;
  LabeledDataset test;
  /// Audit record: scenario, class names, per-class counts before and after
  /// balancing, split sizes, seeds.
  nlohmann::json summary;
};

/// balance -> split, recording the audit summary.
PreparedData prepare_data(const LabeledDataset& all, const DataConfig& config);

}  // namespace uamqa
