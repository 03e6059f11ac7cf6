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

#include "uamqa/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <set>

#include "uamqa/errors.hpp"
#include "uamqa/io.hpp"
#include "uamqa/tsf.hpp"

namespace uamqa {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Specimen specimen) {
  return specimen == Specimen::Thermocouple ? "thermocouple" : "baseline";
}

Specimen specimen_from_string(const std::string& text) {
  if (text == "baseline") return Specimen::Baseline;
  if (text == "thermocouple") return Specimen::Thermocouple;
  throw ConfigError("specimen must be 'baseline' or 'thermocouple', got '" +
                    text + "'");
}

std::size_t power_rank(int power_w) {
  const auto it = std::find(kPowerLevels.begin(), kPowerLevels.end(), power_w);
  if (it == kPowerLevels.end()) {
    throw ConfigError("unsupported power " + std::to_string(power_w) +
                      " W; valid levels are 300, 600, 900, 1200, 1500 W");
  }
  return static_cast<std::size_t>(it - kPowerLevels.begin());
}

void ThermalModel::validate() const {
  if (!(peak_slope_c_per_w > 0.0)) {
    throw ConfigError("peak slope must be positive so peaks rise with power");
  }
  if (!(spot_sigma_px > 0.0) || !(tc_sigma_px > 0.0)) {
    throw ConfigError("Gaussian radii must be positive");
  }
  if (!(sensor.max_c > sensor.min_c)) {
    throw ConfigError("sensor range is empty");
  }
}

double power_to_peak(int power_w, const ThermalModel& model) {
  power_rank(power_w);
  return model.peak_intercept_c + model.peak_slope_c_per_w * power_w;
}

ClipSpec ClipSpec::camera() { return ClipSpec{}; }

ClipSpec ClipSpec::desk() {
  ClipSpec s;
  s.n_frames = 10;
  s.width = 200;
  s.height = 200;
  s.weld_speed_px_per_frame = 2.0;
  return s;
}

void ClipSpec::validate() const {
  power_rank(power_w);
  if (n_frames < 3) {
    throw ConfigError("a clip needs at least 3 frames (lead-in, weld, tail)");
  }
  if (width == 0 || height == 0) throw ConfigError("clip extents must be positive");
  if (noise_sigma_c < 0.0) throw ConfigError("noise sigma must be non-negative");
  if (!(fps > 0.0)) throw ConfigError("fps must be positive");
}

GeneratedClip generate_clip(const ClipSpec& spec, const ThermalModel& model) {
  spec.validate();
  model.validate();
  const std::size_t n_cold = std::max<std::size_t>(1, spec.n_frames / 10);
  const std::size_t first = n_cold;
  const std::size_t last = spec.n_frames - n_cold - 1;
  const std::size_t n_weld = last - first + 1;

  const double peak = power_to_peak(spec.power_w, model);
  const double y0 = static_cast<double>(spec.height / 2);
  const double x_start =
      static_cast<double>(spec.width / 2) -
      std::round(spec.weld_speed_px_per_frame * static_cast<double>(n_weld - 1) / 2.0);
  const double tc_x = x_start + model.tc_offset_x_px;
  const double tc_y = y0 + model.tc_offset_y_px;
  const double spot_den = 2.0 * model.spot_sigma_px * model.spot_sigma_px;
  const double tc_den = 2.0 * model.tc_sigma_px * model.tc_sigma_px;
  const bool has_tc = spec.specimen == Specimen::Thermocouple;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  GeneratedClip out;
  VideoClip& clip = out.clip;
  clip.width = spec.width;
  clip.height = spec.height;
  clip.fps = spec.fps;
  clip.temp_range = model.sensor;
  clip.frames.reserve(spec.n_frames);

  for (std::size_t i = 0; i < spec.n_frames; ++i) {
    Frame f(spec.width, spec.height, model.ambient_c);
    if (i >= first && i <= last) {
      const double cx = x_start + spec.weld_speed_px_per_frame *
                                      static_cast<double>(i - first);
      const bool tc_active = has_tc && cx >= tc_x;
      for (std::size_t y = 0; y < spec.height; ++y) {
        const double dy = static_cast<double>(y) - y0;
        const double ty = static_cast<double>(y) - tc_y;
        for (std::size_t x = 0; x < spec.width; ++x) {
          const double dx = static_cast<double>(x) - cx;
          double t = model.ambient_c +
                     (peak - model.ambient_c) * std::exp(-(dx * dx + dy * dy) / spot_den);
          if (tc_active) {
            const double tx = static_cast<double>(x) - tc_x;
            t += model.tc_delta_c * std::exp(-(tx * tx + ty * ty) / tc_den);
          }
          f.at(x, y) = t;
        }
      }
    }
    for (double& v : f.pixels()) {
      if (spec.noise_sigma_c > 0.0) v += spec.noise_sigma_c * noise(rng);
      v = std::clamp(v, model.sensor.min_c, model.sensor.max_c);
    }
    clip.frames.push_back(std::move(f));
  }

  out.manifest.specimen = spec.specimen;
  out.manifest.power_w = spec.power_w;
  out.manifest.layer_index = spec.layer_index;
  out.manifest.weld_interval = {first, last};
  out.manifest.seed = spec.seed;
  return out;
}

void DatasetRequest::validate() const {
  if (specimens.empty() || powers.empty()) {
    throw ConfigError("dataset request needs at least one specimen and power");
  }
  if (per_class == 0) throw ConfigError("per-class count must be at least 1");
  for (const int p : powers) power_rank(p);
  if (std::set<Specimen>(specimens.begin(), specimens.end()).size() !=
          specimens.size() ||
      std::set<int>(powers.begin(), powers.end()).size() != powers.size()) {
    throw ConfigError("duplicate specimen or power in dataset request");
  }
  clip.validate();
  model.validate();
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string clip_file_name(Specimen specimen, int power_w, std::size_t index) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%dW_%03zu.tsf", to_string(specimen).c_str(),
                power_w, index);
  return buf;
}

}  // namespace

std::uint64_t derive_clip_seed(std::uint64_t base_seed, Specimen specimen,
                               int power_w, std::size_t index) {
  std::uint64_t s = splitmix64(base_seed);
  s = splitmix64(s ^ static_cast<std::uint64_t>(specimen));
  s = splitmix64(s ^ static_cast<std::uint64_t>(power_w));
  return splitmix64(s ^ static_cast<std::uint64_t>(index));
}

std::vector<PlannedClip> plan_dataset(const DatasetRequest& request) {
  request.validate();
  std::vector<int> powers = request.powers;
  std::sort(powers.begin(), powers.end());
  std::vector<Specimen> specimens = request.specimens;
  std::sort(specimens.begin(), specimens.end());

  std::vector<PlannedClip> plan;
  for (const Specimen sp : specimens) {
    for (const int p : powers) {
      for (std::size_t k = 0; k < request.per_class; ++k) {
        ClipSpec s = request.clip;
        s.specimen = sp;
        s.power_w = p;
        // Power changes every 10 layers.
        s.layer_index = static_cast<int>(power_rank(p) * 10 + k % 10);
        s.seed = derive_clip_seed(request.base_seed, sp, p, k);
        plan.push_back({s, clip_file_name(sp, p, k)});
      }
    }
  }
  return plan;
}

std::vector<GeneratedClip> generate_dataset(const DatasetRequest& request) {
  const std::vector<PlannedClip> plan = plan_dataset(request);
  std::vector<GeneratedClip> out(plan.size());
  const long long n = static_cast<long long>(plan.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = generate_clip(plan[k].spec, request.model);
    out[k].manifest.file = plan[k].file;
  }
  return out;
}

std::vector<ClipManifest> write_dataset(const DatasetRequest& request,
                                        const fs::path& dir, bool overwrite) {
  const std::vector<PlannedClip> plan = plan_dataset(request);
  fs::create_directories(dir);
  std::set<std::string> names{kManifestFileName};
  for (const PlannedClip& c : plan) names.insert(c.file);
  if (!overwrite) {
    for (const std::string& name : names) {
      if (fs::exists(dir / name)) {
        throw DataError("output path collision: " + (dir / name).string() +
                        " already exists");
      }
    }
  }
  // Clips are generated and written one at a time; camera-sized datasets do
  // not fit in memory at once.
  std::vector<ClipManifest> records(plan.size());
  std::vector<std::exception_ptr> errors(plan.size());
  const long long n = static_cast<long long>(plan.size());
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      GeneratedClip g = generate_clip(plan[k].spec, request.model);
      g.manifest.file = plan[k].file;
      write_tsf(dir / plan[k].file, quantize(g.clip));
      records[k] = std::move(g.manifest);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  write_manifest(dir / kManifestFileName, records);
  return records;
}

json manifest_to_json(const std::vector<ClipManifest>& records) {
  json arr = json::array();
  for (const ClipManifest& m : records) {
    arr.push_back({{"file", m.file},
                   {"specimen", to_string(m.specimen)},
                   {"power_w", m.power_w},
                   {"layer_index", m.layer_index},
                   {"weld_interval", {m.weld_interval.first, m.weld_interval.second}},
                   {"seed", m.seed}});
  }
  return arr;
}

std::vector<ClipManifest> manifest_from_json(const json& j) {
  if (!j.is_array()) throw DataError("manifest must be a JSON array");
  std::vector<ClipManifest> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& r = j[i];
    try {
      ClipManifest m;
      m.file = r.at("file").get<std::string>();
      m.specimen = specimen_from_string(r.at("specimen").get<std::string>());
      m.power_w = r.at("power_w").get<int>();
      power_rank(m.power_w);
      m.layer_index = r.at("layer_index").get<int>();
      const json& wi = r.at("weld_interval");
      if (!wi.is_array() || wi.size() != 2) {
        throw DataError("weld_interval must be [first, last]");
      }
      m.weld_interval = {wi[0].get<std::size_t>(), wi[1].get<std::size_t>()};
      m.seed = r.at("seed").get<std::uint64_t>();
      out.push_back(std::move(m));
    } catch (const json::exception& e) {
      throw DataError("manifest record " + std::to_string(i) + ": " + e.what());
    } catch (const ConfigError& e) {
      throw DataError("manifest record " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

void write_manifest(const fs::path& path, const std::vector<ClipManifest>& records) {
  write_file_atomic(path, manifest_to_json(records).dump(2) + "\n");
}

std::vector<ClipManifest> read_manifest(const fs::path& path) {
  const fs::path file = fs::is_directory(path) ? path / kManifestFileName : path;
  if (!fs::exists(file)) throw DataError("manifest not found: " + file.string());
  try {
    return manifest_from_json(json::parse(read_file_text(file)));
  } catch (const json::parse_error& e) {
    throw DataError(file.string() + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(file.string() + ": " + e.what());
  }
}

}  // namespace uamqa
