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

#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "uamqa/checkpoint.hpp"
#include "uamqa/dataset.hpp"
#include "uamqa/errors.hpp"
#include "uamqa/io.hpp"
#include "uamqa/loss.hpp"
#include "uamqa/metrics.hpp"
#include "uamqa/parallel.hpp"
#include "uamqa/preprocess.hpp"
#include "uamqa/report.hpp"
#include "uamqa/synthgen.hpp"
#include "uamqa/trainer.hpp"
#include "uamqa/tsf.hpp"

namespace uamqa::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::uint64_t seed = 0;
  std::string out;
  std::string dataset;
  std::string checkpoint;
  std::string input;
  bool desk_preset = false;

  // gen
  std::size_t per_class = 10;
  std::vector<int> powers;
  std::vector<std::string> specimens;
  double noise_sigma = 3.0;
  std::size_t frames = 0;
  bool overwrite = false;
  double tc_delta = ThermalModel{}.tc_delta_c;
  double tc_sigma = ThermalModel{}.tc_sigma_px;
  double spot_sigma = ThermalModel{}.spot_sigma_px;

  // preprocessing and dataset assembly
  std::string scenario = "model_4";
  bool pool_all_powers = false;
  std::string crop;
  double retain_fraction = 0.8;
  std::string pca_mode = "component_count";
  bool no_pca = false;
  double hot_threshold = kDefaultHotThresholdC;
  std::string normalize = "sensor_range";
  bool augment_flips = false;
  double train_ratio = 0.8;
  std::string split_level = "frame";
  bool no_balance = false;

  // train
  double lr = 0.01;
  double momentum = 0.9;
  std::size_t batch_size = 16;
  std::size_t epochs = 50;
  bool text_preset = false;
  bool record_time = false;

  // eval
  std::string subset = "test";

  // report
  std::vector<std::string> summaries;
};

void add_pipeline_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--scenario", o.scenario, "model_1, model_2, model_3 or model_4")
      ->capture_default_str();
  cmd->add_flag("--pool-all-powers", o.pool_all_powers,
                "model_1: use every power level, not only 900 W");
  cmd->add_option("--crop", o.crop, "Crop rectangle x,y,w,h (default: centered 160x160)");
  cmd->add_option("--retain-fraction", o.retain_fraction, "PCA retain fraction in (0, 1]")
      ->capture_default_str();
  cmd->add_option("--pca-mode", o.pca_mode, "component_count or variance")
      ->capture_default_str();
  cmd->add_flag("--no-pca", o.no_pca, "Skip PCA denoising");
  cmd->add_option("--hot-threshold", o.hot_threshold, "Weld threshold in C")
      ->capture_default_str();
  cmd->add_option("--normalize", o.normalize, "sensor_range or minmax")
      ->capture_default_str();
  cmd->add_flag("--augment-flips", o.augment_flips,
                "Add horizontally and vertically flipped copies of each frame");
  cmd->add_option("--train-ratio", o.train_ratio, "Train share of each class")
      ->capture_default_str();
  cmd->add_option("--split-level", o.split_level, "frame or clip")->capture_default_str();
  cmd->add_flag("--no-balance", o.no_balance, "Keep unequal class counts");
  cmd->add_option("--seed", o.seed, "Run seed")->capture_default_str();
}

PipelineConfig pipeline_from(const Options& o) {
  PipelineConfig p;
  if (!o.crop.empty() && o.crop != "centered") p.crop = CropRect::parse(o.crop);
  p.pca.retain_fraction = o.retain_fraction;
  p.pca.mode = pca_mode_from_string(o.pca_mode);
  p.pca.validate();
  p.pca_enabled = !o.no_pca;
  p.hot_threshold_c = o.hot_threshold;
  p.normalize = normalize_mode_from_string(o.normalize);
  p.augment_flips = o.augment_flips;
  return p;
}

DataConfig data_from(const Options& o) {
  DataConfig d;
  d.scenario.id = scenario_from_string(o.scenario);
  d.scenario.pool_all_powers = o.pool_all_powers;
  d.pipeline = pipeline_from(o);
  d.train_ratio = o.train_ratio;
  d.split_level = split_level_from_string(o.split_level);
  d.balance = !o.no_balance;
  d.seed = o.seed;
  return d;
}

// Inverse of the "config.data" block run_scenario writes into summary.json.
DataConfig data_from_summary(const json& summary) {
  try {
    const json& d = summary.at("config").at("data");
    Options o;
    o.scenario = summary.at("scenario").get<std::string>();
    o.pool_all_powers = d.at("pool_all_powers").get<bool>();
    o.crop = d.at("crop").get<std::string>();
    o.no_pca = !d.at("pca_enabled").get<bool>();
    o.retain_fraction = d.at("retain_fraction").get<double>();
    o.pca_mode = d.at("pca_mode").get<std::string>();
    o.hot_threshold = d.at("hot_threshold_c").get<double>();
    o.normalize = d.at("normalize").get<std::string>();
    o.augment_flips = d.at("augment_flips").get<bool>();
    o.train_ratio = d.at("train_ratio").get<double>();
    o.split_level = d.at("split_level").get<std::string>();
    o.no_balance = !d.at("balance").get<bool>();
    o.seed = summary.at("seeds").at("balance").get<std::uint64_t>();
    return data_from(o);
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint lacks its training configuration: ") + e.what());
  }
}

void require_dataset_dir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("--dataset is required");
  if (!fs::is_directory(dir)) throw DataError("dataset directory not found: " + dir);
}

void print_counts(std::ostream& out, const std::vector<std::string>& names,
                  const std::vector<std::size_t>& counts, const char* unit) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << "  " << names[i] << ": " << counts[i] << ' ' << unit << '\n';
  }
}

void cmd_gen(const Options& o, std::ostream& out) {
  if (o.out.empty()) throw ConfigError("--out is required");
  DatasetRequest r;
  r.clip = o.desk_preset ? ClipSpec::desk() : ClipSpec::camera();
  r.model.tc_delta_c = o.tc_delta;
  r.model.tc_sigma_px = o.tc_sigma;
  r.model.spot_sigma_px = o.spot_sigma;
  if (o.frames) r.clip.n_frames = o.frames;
  r.clip.noise_sigma_c = o.noise_sigma;
  r.per_class = o.per_class;
  r.base_seed = o.seed;
  if (!o.powers.empty()) r.powers = o.powers;
  if (!o.specimens.empty()) {
    r.specimens.clear();
    for (const auto& s : o.specimens) r.specimens.push_back(specimen_from_string(s));
  }
  r.validate();
  const auto records = write_dataset(r, o.out, o.overwrite);
  std::map<std::string, std::size_t> counts;
  std::vector<std::string> order;
  for (const ClipManifest& m : records) {
    const std::string name = to_string(m.specimen) + "_" + std::to_string(m.power_w) + "W";
    if (counts[name]++ == 0) order.push_back(name);
  }
  out << "wrote " << records.size() << " clips in " << order.size() << " classes to "
      << o.out << '\n';
  for (const auto& name : order) out << "  " << name << ": " << counts[name] << " clips\n";
}

void cmd_prep(const Options& o, std::ostream& out) {
  require_dataset_dir(o.dataset);
  const DataConfig d = data_from(o);
  const LabeledDataset all = load_labeled_dataset(o.dataset, d.scenario, d.pipeline);
  PreparedData prepared = prepare_data(all, d);

  std::map<std::size_t, std::size_t> frames_per_clip;
  for (const Sample& s : all.items) ++frames_per_clip[s.clip];
  const auto manifests = read_manifest(fs::path(o.dataset));
  json clips = json::array();
  for (const auto& [clip, frames] : frames_per_clip) {
    clips.push_back({{"file", manifests.at(clip).file}, {"frames", frames}});
  }
  prepared.summary["clips"] = std::move(clips);
  prepared.summary["image_shape"] = all.items.front().image->shape();

  out << "scenario " << o.scenario << ": " << all.size() << " frames from "
      << frames_per_clip.size() << " clips\n";
  print_counts(out, all.class_names, all.class_counts(), "frames");
  out << "after balancing and splitting: " << prepared.train.size() << " train, "
      << prepared.test.size() << " test\n";
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_file_atomic(fs::path(o.out) / kDatasetSummaryFile, prepared.summary.dump(2) + "\n");
    out << "wrote " << (fs::path(o.out) / kDatasetSummaryFile).string() << '\n';
  }
}

void cmd_train(const Options& o, CLI::App* cmd, std::ostream& out) {
  require_dataset_dir(o.dataset);
  ScenarioRun run;
  run.data = data_from(o);
  run.train.lr = o.lr;
  run.train.momentum = o.momentum;
  run.train.batch_size = o.batch_size;
  run.train.epochs = o.epochs;
  if (o.text_preset && cmd->count("--lr") == 0) run.train.lr = TrainConfig::text_preset().lr;
  if (o.desk_preset && cmd->count("--epochs") == 0) run.train.epochs = 10;
  run.train.seed = o.seed;
  run.train.scenario = run.data.scenario.id;
  run.train.validate();
  run.record_time = o.record_time;
  run.out_dir = o.out.empty() ? fs::path(o.scenario) : fs::path(o.out);
  const std::size_t total = run.train.epochs;
  run.on_epoch = [&out, total](const EpochRecord& e) {
    out << "epoch " << e.epoch << '/' << total << "  loss " << e.train_loss
        << "  test_accuracy " << e.test_accuracy << '\n';
    out.flush();
    return true;
  };

  const ScenarioReport r = run_scenario(fs::path(o.dataset), run);
  out << "final accuracy " << r.summary["final_accuracy"].get<double>() << " on "
      << r.summary["test_size"].get<std::size_t>() << " test frames; "
      << r.summary["param_count"].get<std::size_t>() << " parameters\n";
  out << "artifacts in " << run.out_dir.string() << '\n';
}

std::string training_scenario(const LoadedCheckpoint& ck) {
  try {
    return ck.info.training.at("scenario").get<std::string>();
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint does not record its scenario: ") + e.what());
  }
}

void check_scenario(const Options& o, CLI::App* cmd, const std::string& trained) {
  if (cmd->count("--scenario") && o.scenario != trained) {
    throw ConfigError("checkpoint was trained for " + trained + ", not " + o.scenario);
  }
}

void cmd_eval(const Options& o, CLI::App* cmd, std::ostream& out) {
  if (o.checkpoint.empty()) throw ConfigError("--checkpoint is required");
  require_dataset_dir(o.dataset);
  const LoadedCheckpoint ck = load_checkpoint(o.checkpoint);
  check_scenario(o, cmd, training_scenario(ck));
  const DataConfig d = data_from_summary(ck.info.training);
  const LabeledDataset all = load_labeled_dataset(o.dataset, d.scenario, d.pipeline);

  LabeledDataset target;
  if (o.subset == "all") {
    target = all;
  } else if (o.subset == "test" || o.subset == "train") {
    PreparedData p = prepare_data(all, d);
    target = o.subset == "test" ? std::move(p.test) : std::move(p.train);
  } else {
    throw ConfigError("--subset must be train, test or all; got '" + o.subset + "'");
  }
  const ConfusionMatrix cm = evaluate(ck.model, target);
  out << "accuracy " << accuracy(cm) << " on " << cm.total() << " " << o.subset
      << " frames\n" << cm.to_csv();
  const auto metrics = per_class_metrics(cm);
  out << "class,precision,recall\n";
  for (std::size_t k = 0; k < metrics.size(); ++k) {
    out << cm.class_names()[k] << ','
        << (metrics[k].precision ? std::to_string(*metrics[k].precision) : "undefined") << ','
        << (metrics[k].recall ? std::to_string(*metrics[k].recall) : "undefined") << '\n';
  }
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_file_atomic(fs::path(o.out) / kConfusionFile, cm.to_csv());
  }
}

void cmd_infer(const Options& o, CLI::App* cmd, std::ostream& out) {
  if (o.checkpoint.empty()) throw ConfigError("--checkpoint is required");
  if (o.input.empty()) throw ConfigError("--input is required");
  const LoadedCheckpoint ck = load_checkpoint(o.checkpoint);
  check_scenario(o, cmd, training_scenario(ck));
  PipelineConfig p = data_from_summary(ck.info.training).pipeline;
  p.augment_flips = false;
  if (cmd->count("--crop")) p.crop = CropRect::parse(o.crop);
  std::vector<std::string> names;
  try {
    names = ck.info.training.at("class_names").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint does not record class names: ") + e.what());
  }

  const VideoClip clip = to_clip(read_tsf(o.input));
  const std::size_t first = weld_interval(clip, p.hot_threshold_c).first;
  const std::vector<Tensor> frames = preprocess_pipeline(clip, p);
  const Shape expected = ck.model.config().input_shape();
  if (frames.front().shape() != expected) {
    throw ShapeError("checkpoint expects frames " + shape_string(expected) +
                     ", preprocessing produced " + shape_string(frames.front().shape()));
  }

  std::ostringstream csv;
  csv << "frame_index,predicted_class,confidence\n";
  std::vector<std::size_t> votes(names.size(), 0);
  constexpr std::size_t kBatch = 32;
  for (std::size_t start = 0; start < frames.size(); start += kBatch) {
    const std::size_t n = std::min(kBatch, frames.size() - start);
    Shape shape{n};
    shape.insert(shape.end(), expected.begin(), expected.end());
    Tensor batch(shape);
    for (std::size_t i = 0; i < n; ++i) {
      std::copy(frames[start + i].raw(), frames[start + i].raw() + frames[start + i].size(),
                batch.raw() + i * frames[start + i].size());
    }
    const Tensor logits = ck.model.forward(batch);
    const TensorD probs = softmax(logits);
    const auto pred = predict(logits);
    for (std::size_t i = 0; i < n; ++i) {
      ++votes.at(pred[i]);
      csv << first + start + i << ',' << names.at(pred[i]) << ','
          << probs[i * names.size() + pred[i]] << '\n';
    }
  }
  if (o.out.empty()) {
    out << csv.str();
  } else {
    write_file_atomic(o.out, csv.str());
  }
  const auto best = static_cast<std::size_t>(
      std::max_element(votes.begin(), votes.end()) - votes.begin());
  out << "majority " << names[best] << " (" << votes[best] << '/' << frames.size()
      << " frames)\n";
}

void cmd_report(const Options& o, std::ostream& out) {
  std::vector<fs::path> paths(o.summaries.begin(), o.summaries.end());
  const std::string table = format_report(read_summaries(paths));
  out << table;
  if (!o.out.empty()) write_file_atomic(o.out, table);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Thermal-video weld quality classifier"};
  app.name(args.empty() ? "uamqa" : fs::path(args[0]).filename().string());
  app.set_config("--config", "", "TOML or INI file with option values; flags override it");
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate a synthetic thermal clip dataset");
  gen->add_option("--out", o.out, "Output directory")->required();
  gen->add_option("--per-class", o.per_class, "Clips per specimen and power")
      ->capture_default_str();
  gen->add_option("--seed", o.seed, "Base seed")->capture_default_str();
  gen->add_option("--powers", o.powers, "Power levels in W (default: all five)")
      ->delimiter(',');
  gen->add_option("--specimens", o.specimens, "baseline and/or thermocouple")
      ->delimiter(',');
  gen->add_option("--noise-sigma", o.noise_sigma, "Sensor noise in C")->capture_default_str();
  gen->add_option("--frames", o.frames, "Frames per clip (default per preset)");
  gen->add_flag("--desk-preset", o.desk_preset,
                "200x200 clips of 10 frames, 20 per class unless --per-class is given");
  gen->add_option("--tc-delta", o.tc_delta, "Thermocouple signature amplitude in C")
      ->capture_default_str();
  gen->add_option("--tc-sigma", o.tc_sigma, "Thermocouple signature radius in px")
      ->capture_default_str();
  gen->add_option("--spot-sigma", o.spot_sigma, "Weld spot radius in px")
      ->capture_default_str();
  gen->add_flag("--overwrite", o.overwrite, "Replace existing files in --out");

  auto* prep = app.add_subcommand("prep", "Preprocess a dataset and report class counts");
  prep->add_option("--dataset", o.dataset, "Dataset directory");
  prep->add_option("--out", o.out, "Directory for dataset_summary.json");
  add_pipeline_flags(prep, o);

  auto* train = app.add_subcommand("train", "Train and evaluate one scenario");
  train->add_option("--dataset", o.dataset, "Dataset directory");
  train->add_option("--out", o.out, "Artifact directory (default: ./<scenario>)");
  add_pipeline_flags(train, o);
  train->add_option("--lr", o.lr, "Learning rate")->capture_default_str();
  train->add_option("--momentum", o.momentum, "SGD momentum")->capture_default_str();
  train->add_option("--batch-size", o.batch_size, "Batch size")->capture_default_str();
  train->add_option("--epochs", o.epochs, "Epochs")->capture_default_str();
  train->add_flag("--text-preset", o.text_preset, "lr 0.001 unless --lr is given");
  train->add_flag("--desk-preset", o.desk_preset, "10 epochs unless --epochs is given");
  train->add_flag("--record-time", o.record_time,
                  "Write per-epoch wall-clock seconds to history.csv");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a dataset");
  eval->add_option("--checkpoint", o.checkpoint, "model.uamc path");
  eval->add_option("--dataset", o.dataset, "Dataset directory");
  eval->add_option("--scenario", o.scenario, "Expected scenario of the checkpoint");
  eval->add_option("--subset", o.subset, "train, test or all")->capture_default_str();
  eval->add_option("--out", o.out, "Directory for confusion.csv");

  auto* infer = app.add_subcommand("infer", "Classify every weld frame of one clip");
  infer->add_option("--checkpoint", o.checkpoint, "model.uamc path");
  infer->add_option("--input", o.input, "TSF clip");
  infer->add_option("--scenario", o.scenario, "Expected scenario of the checkpoint");
  infer->add_option("--crop", o.crop, "Override the checkpoint's crop rectangle");
  infer->add_option("--out", o.out, "CSV path (default: stdout)");

  auto* report = app.add_subcommand("report", "Tabulate summary.json files");
  report->add_option("summaries", o.summaries, "summary.json files or run directories")
      ->required();
  report->add_option("--out", o.out, "Also write the table to this file");

  try {
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const int threads = configure_threads();
    CLI::App* cmd = app.get_subcommands().front();
    out << "# uamqa " << cmd->get_name() << " (threads " << threads << ")\n";
    std::istringstream echo(app.config_to_str(true, false));
    const std::string prefix = cmd->get_name() + ".";
    for (std::string line; std::getline(echo, line);) {
      if (line.rfind(prefix, 0) == 0) out << "# " << line << '\n';
    }
    if (cmd == gen) {
      if (o.desk_preset && gen->count("--per-class") == 0) o.per_class = 20;
      cmd_gen(o, out);
    } else if (cmd == prep) {
      cmd_prep(o, out);
    } else if (cmd == train) {
      cmd_train(o, cmd, out);
    } else if (cmd == eval) {
      cmd_eval(o, cmd, out);
    } else if (cmd == infer) {
      cmd_infer(o, cmd, out);
    } else {
      cmd_report(o, out);
    }
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kNumericError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << '\n';
    return kUnexpected;
  }
}

}  // namespace uamqa::cli
