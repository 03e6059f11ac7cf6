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

#include "uamqa/dataset.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <numeric>
#include <random>

#include "uamqa/errors.hpp"
#include "uamqa/tsf.hpp"

namespace uamqa {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::Model1:
      return "model_1";
    case ScenarioId::Model2:
      return "model_2";
    case ScenarioId::Model3:
      return "model_3";
    case ScenarioId::Model4:
      return "model_4";
  }
  return "?";
}

ScenarioId scenario_from_string(const std::string& text) {
  for (const ScenarioId id : {ScenarioId::Model1, ScenarioId::Model2,
                              ScenarioId::Model3, ScenarioId::Model4}) {
    if (to_string(id) == text) return id;
  }
  throw ConfigError("scenario must be one of model_1, model_2, model_3, "
                    "model_4; got '" + text + "'");
}

std::size_t Scenario::num_classes() const {
  switch (id) {
    case ScenarioId::Model1:
      return 2;
    case ScenarioId::Model2:
    case ScenarioId::Model3:
      return kPowerLevels.size();
    case ScenarioId::Model4:
      return 2 * kPowerLevels.size();
  }
  return 0;
}

std::optional<ClassIndex> Scenario::class_of(Specimen specimen,
                                             int power_w) const {
  const auto rank = static_cast<ClassIndex>(power_rank(power_w));
  const auto spec = static_cast<ClassIndex>(specimen == Specimen::Thermocouple);
  switch (id) {
    case ScenarioId::Model1:
      if (!pool_all_powers && power_w != 900) return std::nullopt;
      return spec;
    case ScenarioId::Model2:
      if (specimen != Specimen::Baseline) return std::nullopt;
      return rank;
    case ScenarioId::Model3:
      if (specimen != Specimen::Thermocouple) return std::nullopt;
      return rank;
    case ScenarioId::Model4:
      return spec * static_cast<ClassIndex>(kPowerLevels.size()) + rank;
  }
  return std::nullopt;
}

std::vector<std::string> Scenario::class_names() const {
  const auto name = [](Specimen s, int p) {
    return to_string(s) + "_" + std::to_string(p) + "W";
  };
  std::vector<std::string> out;
  switch (id) {
    case ScenarioId::Model1:
      if (pool_all_powers) return {"baseline", "thermocouple"};
      return {name(Specimen::Baseline, 900), name(Specimen::Thermocouple, 900)};
    case ScenarioId::Model2:
      for (const int p : kPowerLevels) out.push_back(name(Specimen::Baseline, p));
      break;
    case ScenarioId::Model3:
      for (const int p : kPowerLevels) out.push_back(name(Specimen::Thermocouple, p));
      break;
    case ScenarioId::Model4:
      for (const Specimen s : {Specimen::Baseline, Specimen::Thermocouple}) {
        for (const int p : kPowerLevels) out.push_back(name(s, p));
      }
      break;
  }
  return out;
}

std::vector<LabeledClip> assign_labels(const std::vector<ClipManifest>& manifests,
                                       const Scenario& scenario) {
  std::vector<LabeledClip> out;
  for (std::size_t i = 0; i < manifests.size(); ++i) {
    std::optional<ClassIndex> c;
    try {
      c = scenario.class_of(manifests[i].specimen, manifests[i].power_w);
    } catch (const ConfigError& e) {
      throw DataError("manifest record " + std::to_string(i) + " (" +
                      manifests[i].file + "): " + e.what());
    }
    if (c) out.push_back({i, *c});
  }
  return out;
}

std::string to_string(SplitTag tag) {
  switch (tag) {
    case SplitTag::Train:
      return "train";
    case SplitTag::Test:
      return "test";
    case SplitTag::All:
      break;
  }
  return "all";
}

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(num_classes(), 0);
  for (const Sample& s : items) {
    if (s.label >= counts.size()) {
      throw DataError("sample label " + std::to_string(s.label) +
                      " exceeds the class count " + std::to_string(counts.size()));
    }
    ++counts[s.label];
  }
  return counts;
}

namespace {

// Indices of each class's items, in dataset order.
std::vector<std::vector<std::size_t>> by_class(const LabeledDataset& d) {
  std::vector<std::vector<std::size_t>> out(d.num_classes());
  for (std::size_t i = 0; i < d.items.size(); ++i) {
    out.at(d.items[i].label).push_back(i);
  }
  return out;
}

LabeledDataset subset(const LabeledDataset& d, std::vector<std::size_t> idx,
                      SplitTag tag) {
  std::sort(idx.begin(), idx.end());
  LabeledDataset out;
  out.class_names = d.class_names;
  out.tag = tag;
  out.items.reserve(idx.size());
  for (const std::size_t i : idx) out.items.push_back(d.items[i]);
  return out;
}

}  // namespace

LabeledDataset balance(const LabeledDataset& dataset, std::uint64_t seed) {
  auto groups = by_class(dataset);
  std::size_t target = dataset.items.size();
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (groups[c].empty()) {
      throw DataError("class '" + dataset.class_names[c] + "' has no samples");
    }
    target = std::min(target, groups[c].size());
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> keep;
  for (auto& g : groups) {
    std::shuffle(g.begin(), g.end(), rng);
    keep.insert(keep.end(), g.begin(), g.begin() + static_cast<std::ptrdiff_t>(target));
  }
  return subset(dataset, std::move(keep), dataset.tag);
}

std::string to_string(SplitLevel level) {
  return level == SplitLevel::Clip ? "clip" : "frame";
}

SplitLevel split_level_from_string(const std::string& text) {
  if (text == "frame") return SplitLevel::Frame;
  if (text == "clip") return SplitLevel::Clip;
  throw ConfigError("split level must be 'frame' or 'clip', got '" + text + "'");
}

SplitResult split(const LabeledDataset& dataset, double ratio,
                  std::uint64_t seed, SplitLevel level) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw ConfigError("split ratio must lie in (0, 1), got " + std::to_string(ratio));
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train, test;
  const auto groups = by_class(dataset);
  for (std::size_t c = 0; c < groups.size(); ++c) {
    const auto& g = groups[c];
    if (level == SplitLevel::Frame) {
      if (g.size() < 2) {
        throw DataError("class '" + dataset.class_names[c] + "' has " +
                        std::to_string(g.size()) + " samples; need at least 2 to split");
      }
      std::vector<std::size_t> order = g;
      std::shuffle(order.begin(), order.end(), rng);
      const auto n_train = static_cast<std::size_t>(ratio * static_cast<double>(g.size()));
      train.insert(train.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
      test.insert(test.end(), order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
    } else {
      std::map<std::size_t, std::vector<std::size_t>> clips;
      for (const std::size_t i : g) clips[dataset.items[i].clip].push_back(i);
      if (clips.size() < 2) {
        throw DataError("class '" + dataset.class_names[c] + "' has " +
                        std::to_string(clips.size()) + " clips; need at least 2 to split");
      }
      std::vector<std::size_t> ids;
      for (const auto& [id, _] : clips) ids.push_back(id);
      std::shuffle(ids.begin(), ids.end(), rng);
      const auto n_train = static_cast<std::size_t>(ratio * static_cast<double>(ids.size()));
      for (std::size_t k = 0; k < ids.size(); ++k) {
        auto& dst = k < n_train ? train : test;
        const auto& members = clips[ids[k]];
        dst.insert(dst.end(), members.begin(), members.end());
      }
    }
  }
  return {subset(dataset, std::move(train), SplitTag::Train),
          subset(dataset, std::move(test), SplitTag::Test)};
}

std::vector<std::vector<std::size_t>> batch_indices(std::size_t count,
                                                    std::size_t batch_size,
                                                    std::uint64_t shuffle_seed,
                                                    std::size_t epoch) {
  if (batch_size == 0) throw ConfigError("batch size must be at least 1");
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::seed_seq seq{static_cast<std::uint32_t>(shuffle_seed),
                    static_cast<std::uint32_t>(shuffle_seed >> 32),
                    static_cast<std::uint32_t>(epoch),
                    static_cast<std::uint32_t>(epoch >> 32)};
  std::mt19937_64 rng(seq);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < count; i += batch_size) {
    const std::size_t end = std::min(count, i + batch_size);
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                     order.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return out;
}

Batch make_batch(const LabeledDataset& dataset,
                 std::span<const std::size_t> indices) {
  if (indices.empty()) throw UsageError("cannot build an empty batch");
  const Tensor& first = *dataset.items.at(indices.front()).image;
  Shape shape{indices.size()};
  shape.insert(shape.end(), first.shape().begin(), first.shape().end());
  Batch b{Tensor(shape), {}};
  b.labels.reserve(indices.size());
  const std::size_t per = first.size();
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const Sample& s = dataset.items.at(indices[k]);
    if (s.image->shape() != first.shape()) {
      throw ShapeError("batch mixes image shapes " + shape_string(first.shape()) +
                       " and " + shape_string(s.image->shape()));
    }
    std::copy(s.image->raw(), s.image->raw() + per, b.images.raw() + k * per);
    b.labels.push_back(s.label);
  }
  return b;
}

std::vector<Batch> batches(const LabeledDataset& dataset, std::size_t batch_size,
                           std::uint64_t shuffle_seed, std::size_t epoch) {
  std::vector<Batch> out;
  for (const auto& idx :
       batch_indices(dataset.size(), batch_size, shuffle_seed, epoch)) {
    out.push_back(make_batch(dataset, idx));
  }
  return out;
}

LabeledDataset load_labeled_dataset(const fs::path& dir, const Scenario& scenario,
                                    const PipelineConfig& pipeline) {
  if (!fs::is_directory(dir)) {
    throw DataError("dataset directory not found: " + dir.string());
  }
  const std::vector<ClipManifest> manifests = read_manifest(dir);
  const std::vector<LabeledClip> labeled = assign_labels(manifests, scenario);
  if (labeled.empty()) {
    throw DataError("no clips in " + dir.string() + " belong to scenario " +
                    to_string(scenario.id));
  }

  std::vector<std::vector<Tensor>> frames(labeled.size());
  std::vector<std::exception_ptr> errors(labeled.size());
  const long long n = static_cast<long long>(labeled.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const ClipManifest& m = manifests[labeled[k].manifest_index];
    try {
      const VideoClip clip = to_clip(read_tsf(dir / m.file));
      frames[k] = preprocess_pipeline(clip, pipeline);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (std::size_t k = 0; k < errors.size(); ++k) {
    if (!errors[k]) continue;
    const std::string file = manifests[labeled[k].manifest_index].file;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const NoWeldDetected&) {
      throw;
    } catch (const Error& e) {
      throw DataError(file + ": " + e.what());
    }
  }

  LabeledDataset out;
  out.class_names = scenario.class_names();
  for (std::size_t k = 0; k < labeled.size(); ++k) {
    for (Tensor& t : frames[k]) {
      out.items.push_back({std::make_shared<const Tensor>(std::move(t)),
                           labeled[k].label, labeled[k].manifest_index});
    }
  }
  return out;
}

PreparedData prepare_data(const LabeledDataset& all, const DataConfig& config) {
  const std::uint64_t balance_seed = config.seed;
  const std::uint64_t split_seed = config.seed + 1;
  const auto before = all.class_counts();
  LabeledDataset pool = config.balance ? balance(all, balance_seed) : all;
  SplitResult s = split(pool, config.train_ratio, split_seed, config.split_level);

  json summary;
  summary["scenario"] = to_string(config.scenario.id);
  summary["pool_all_powers"] = config.scenario.pool_all_powers;
  summary["class_names"] = all.class_names;
  summary["counts_before_balance"] = before;
  summary["counts_after_balance"] = pool.class_counts();
  summary["balanced"] = config.balance;
  summary["split"] = {{"ratio", config.train_ratio},
                      {"level", to_string(config.split_level)},
                      {"train", s.train.size()},
                      {"test", s.test.size()},
                      {"train_per_class", s.train.class_counts()},
                      {"test_per_class", s.test.class_counts()}};
  summary["seeds"] = {{"balance", balance_seed}, {"split", split_seed}};
  return {std::move(s.train), std::move(s.test), std::move(summary)};
}

}  // namespace uamqa
