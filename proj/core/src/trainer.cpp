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

#include "uamqa/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "uamqa/checkpoint.hpp"
#include "uamqa/errors.hpp"
#include "uamqa/io.hpp"
#include "uamqa/loss.hpp"

namespace uamqa {

namespace fs = std::filesystem;
using nlohmann::json;

TrainConfig TrainConfig::text_preset() {
  TrainConfig c;
  c.lr = 0.001;
  return c;
}

void TrainConfig::validate() const {
  if (!(lr > 0.0) || !std::isfinite(lr)) {
    throw ConfigError("learning rate must be positive, got " + std::to_string(lr));
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ConfigError("momentum must lie in [0, 1), got " + std::to_string(momentum));
  }
  if (batch_size == 0) throw ConfigError("batch size must be at least 1");
  if (epochs == 0) throw ConfigError("epochs must be at least 1");
  if (precision != "f32") {
    throw ConfigError("training precision must be 'f32', got '" + precision + "'");
  }
}

json TrainConfig::to_json() const {
  return {{"lr", lr},
          {"momentum", momentum},
          {"batch_size", batch_size},
          {"epochs", epochs},
          {"seed", seed},
          {"precision", precision},
          {"scenario", to_string(scenario)}};
}

std::string TrainHistory::to_csv(bool include_time) const {
  std::string out = "epoch,train_loss,test_accuracy,seconds\n";
  char line[160];
  for (const EpochRecord& e : epochs) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.3f\n", e.epoch,
                  e.train_loss, e.test_accuracy, include_time ? e.seconds : 0.0);
    out += line;
  }
  return out;
}

std::vector<ClassIndex> predict(const Tensor& logits) {
  require_rank(logits, 2, "predict logits");
  const std::size_t n = logits.dim(0), k = logits.dim(1);
  std::vector<ClassIndex> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const float* row = logits.raw() + i * k;
    std::size_t best = 0;
    for (std::size_t j = 1; j < k; ++j) {
      if (row[j] > row[best]) best = j;
    }
    out[i] = static_cast<ClassIndex>(best);
  }
  return out;
}

ConfusionMatrix evaluate(const Model<float>& model, const LabeledDataset& dataset,
                         std::size_t batch_size) {
  if (dataset.num_classes() != model.config().num_classes) {
    throw ShapeError("dataset has " + std::to_string(dataset.num_classes()) +
                     " classes, model " + std::to_string(model.config().num_classes));
  }
  if (batch_size == 0) throw ConfigError("batch size must be at least 1");
  ConfusionMatrix cm(dataset.class_names);
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < dataset.size(); start += batch_size) {
    const std::size_t end = std::min(dataset.size(), start + batch_size);
    idx.clear();
    for (std::size_t i = start; i < end; ++i) idx.push_back(i);
    const Batch b = make_batch(dataset, idx);
    const auto pred = predict(model.forward(b.images));
    for (std::size_t i = 0; i < pred.size(); ++i) cm.add(b.labels[i], pred[i]);
  }
  return cm;
}

TrainHistory train(Model<float>& model, const LabeledDataset& train_set,
                   const LabeledDataset& test_set, const TrainConfig& config,
                   std::uint64_t shuffle_seed, const EpochCallback& on_epoch) {
  config.validate();
  if (train_set.num_classes() != model.config().num_classes) {
    throw ShapeError("training set has " + std::to_string(train_set.num_classes()) +
                     " classes, model " + std::to_string(model.config().num_classes));
  }
  if (train_set.size() == 0) throw DataError("training set is empty");

  TrainHistory history;
  ForwardCache<float> cache;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto order =
        batch_indices(train_set.size(), config.batch_size, shuffle_seed, epoch);
    double loss_sum = 0.0;
    for (std::size_t bi = 0; bi < order.size(); ++bi) {
      const Batch b = make_batch(train_set, order[bi]);
      const Tensor logits = model.forward(b.images, cache);
      const auto lg = softmax_cross_entropy(logits, b.labels);
      if (!std::isfinite(lg.loss)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) +
                           ", batch " + std::to_string(bi + 1) + " of " +
                           std::to_string(order.size()) + " (lr " +
                           std::to_string(config.lr) + ")");
      }
      loss_sum += lg.loss;
      const auto grads = model.backward(cache, lg.dlogits);
      sgd_momentum_step(model, grads, config.lr, config.momentum);
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(order.size());
    rec.test_accuracy = test_set.size() ? accuracy(evaluate(model, test_set)) : 0.0;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    history.epochs.push_back(rec);
    if (on_epoch && !on_epoch(rec)) break;
  }
  return history;
}

namespace {

[[noreturn]] void rethrow_with_context(const std::string& prefix) {
  try {
    throw;
  } catch (const NoWeldDetected&) {
    throw;
  } catch (const ShapeError& e) {
    throw ShapeError(prefix + e.what());
  } catch (const UsageError& e) {
    throw UsageError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const NumericError& e) {
    throw NumericError(prefix + e.what());
  }
}

}  // namespace

ScenarioReport run_scenario(const LabeledDataset& all, const ScenarioRun& run) {
  const std::string context = to_string(run.data.scenario.id) + ": ";
  try {
    run.train.validate();
    const RunSeeds seeds = RunSeeds::from(run.train.seed);
    DataConfig data = run.data;
    data.seed = seeds.data;
    PreparedData prepared = prepare_data(all, data);

    const ModelConfig mc = ModelConfig::standard(all.num_classes());
    ScenarioReport report;
    report.model = build_model<float>(mc, seeds.init);
    report.history = train(report.model, prepared.train, prepared.test, run.train,
                           seeds.shuffle, run.on_epoch);
    report.confusion = evaluate(report.model, prepared.test);
    report.dataset_summary = std::move(prepared.summary);

    const EpochRecord& last = report.history.epochs.back();
    json& s = report.summary;
    s["scenario"] = to_string(run.data.scenario.id);
    s["num_classes"] = mc.num_classes;
    s["class_names"] = all.class_names;
    s["param_count"] = param_count(mc);
    s["final_accuracy"] = accuracy(report.confusion);
    s["final_loss"] = last.train_loss;
    s["epochs_completed"] = report.history.epochs.size();
    s["train_size"] = prepared.train.size();
    s["test_size"] = prepared.test.size();
    s["config"] = {{"train", run.train.to_json()},
                   {"data",
                    {{"train_ratio", data.train_ratio},
                     {"split_level", to_string(data.split_level)},
                     {"balance", data.balance},
                     {"pool_all_powers", data.scenario.pool_all_powers},
                     {"crop", data.pipeline.crop ? data.pipeline.crop->to_string() : "centered"},
                     {"pca_enabled", data.pipeline.pca_enabled},
                     {"retain_fraction", data.pipeline.pca.retain_fraction},
                     {"pca_mode", to_string(data.pipeline.pca.mode)},
                     {"hot_threshold_c", data.pipeline.hot_threshold_c},
                     {"normalize", to_string(data.pipeline.normalize)},
                     {"augment_flips", data.pipeline.augment_flips}}}};
    s["seeds"] = {{"run", run.train.seed},
                  {"balance", seeds.data},
                  {"split", seeds.data + 1},
                  {"init", seeds.init},
                  {"shuffle", seeds.shuffle}};

    if (!run.out_dir.empty()) {
      fs::create_directories(run.out_dir);
      CheckpointInfo info{mc, seeds.init, s};
      save_checkpoint(run.out_dir / kCheckpointFile, report.model, info);
      write_file_atomic(run.out_dir / kHistoryFile, report.history.to_csv(run.record_time));
      write_file_atomic(run.out_dir / kConfusionFile, report.confusion.to_csv());
      write_file_atomic(run.out_dir / kDatasetSummaryFile,
                        report.dataset_summary.dump(2) + "\n");
      write_file_atomic(run.out_dir / kSummaryFile, s.dump(2) + "\n");
    }
    return report;
  } catch (const Error&) {
    rethrow_with_context(context);
  } catch (const fs::filesystem_error& e) {
    throw DataError(context + e.what());
  }
}

ScenarioReport run_scenario(const fs::path& dataset_dir, const ScenarioRun& run) {
  LabeledDataset all;
  try {
    all = load_labeled_dataset(dataset_dir, run.data.scenario, run.data.pipeline);
  } catch (const Error&) {
    rethrow_with_context(to_string(run.data.scenario.id) + ": ");
  }
  return run_scenario(all, run);
}

}  // namespace uamqa
