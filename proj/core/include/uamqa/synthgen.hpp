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

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "uamqa/video.hpp"

namespace uamqa {

enum class Specimen { Baseline, Thermocouple };

std::string to_string(Specimen specimen);
Specimen specimen_from_string(const std::string& text);

/// Welding power settings, ascending.
inline constexpr std::array<int, 5> kPowerLevels{300, 600, 900, 1200, 1500};

/// Index of `power_w` in kPowerLevels; ConfigError listing the valid levels
/// otherwise.
std::size_t power_rank(int power_w);

/// Physical stand-in for the weld scene. None of these constants come from
/// measurements; they are chosen so power levels separate cleanly in peak
/// temperature while the default 3 C noise still blurs individual pixels.
struct ThermalModel {
  double ambient_c = 25.0;
  double peak_intercept_c = 40.0;
  double peak_slope_c_per_w = 0.12;
  double spot_sigma_px = 8.0;
  // Thermocouple signature: a Gaussian bump offset from the start of the weld
  // path, present in every weld frame once the head has passed it.
  double tc_offset_x_px = 0.0;
  double tc_offset_y_px = 24.0;
  double tc_sigma_px = 6.0;
  double tc_delta_c = 40.0;
  TemperatureRange sensor;

  void validate() const;
};

/// peak = intercept + slope * power (76 C at 300 W, 220 C at 1500 W by
/// default).
double power_to_peak(int power_w, const ThermalModel& model = {});

struct ClipSpec {
  Specimen specimen = Specimen::Baseline;
  int power_w = 900;
  int layer_index = 0;
  std::size_t n_frames = 40;
  std::size_t width = 640;
  std::size_t height = 480;
  double fps = 32.0;
  double weld_speed_px_per_frame = 3.0;
  double noise_sigma_c = 3.0;
  std::uint64_t seed = 0;

  /// 640x480 at 32 fps, 40 frames.
  static ClipSpec camera();
  /// 200x200, 10 frames: the reduced preset used for quick runs and CI.
  static ClipSpec desk();

  void validate() const;
};

struct ClipManifest {
  std::string file;
  Specimen specimen = Specimen::Baseline;
  int power_w = 0;
  int layer_index = 0;
  /// Inclusive frame range during which the head is welding.
  std::pair<std::size_t, std::size_t> weld_interval{0, 0};
  std::uint64_t seed = 0;

  friend bool operator==(const ClipManifest&, const ClipManifest&) = default;
};

struct GeneratedClip {
  VideoClip clip;
  ClipManifest manifest;
};

/// Ambient field plus a Gaussian hot spot moving along +x through the weld
/// frames; the first and last 10% of frames (at least one each) stay cold.
/// Thermocouple clips add the signature bump. I.i.d. Gaussian sensor noise
/// is drawn for every pixel of every frame, then clamped to the sensor range.
GeneratedClip generate_clip(const ClipSpec& spec, const ThermalModel& model = {});

struct DatasetRequest {
  std::vector<Specimen> specimens{Specimen::Baseline, Specimen::Thermocouple};
  std::vector<int> powers{kPowerLevels.begin(), kPowerLevels.end()};
  std::size_t per_class = 10;
  /// Geometry and noise template; specimen, power, layer and seed are set
  /// per clip.
  ClipSpec clip = ClipSpec::desk();
  ThermalModel model;
  std::uint64_t base_seed = 0;

  void validate() const;
};

/// Per-clip seed derived from the dataset seed and the clip's coordinates.
std::uint64_t derive_clip_seed(std::uint64_t base_seed, Specimen specimen,
                               int power_w, std::size_t index);

struct PlannedClip {
  ClipSpec spec;
  std::string file;
};

/// Per-clip specs and file names a request expands to, in generation order.
std::vector<PlannedClip> plan_dataset(const DatasetRequest& request);

/// Clips ordered specimen-major, then power ascending, then index. File names
/// are "<specimen>_<power>W_<index>.tsf".
std::vector<GeneratedClip> generate_dataset(const DatasetRequest& request);

inline constexpr char kManifestFileName[] = "manifest.json";

/// Writes one TSF per clip plus manifest.json into `dir`. Unless `overwrite`
/// is set, throws DataError if any target file already exists.
std::vector<ClipManifest> write_dataset(const DatasetRequest& request,
                                        const std::filesystem::path& dir,
                                        bool overwrite = false);

nlohmann::json manifest_to_json(const std::vector<ClipManifest>& records);
std::vector<ClipManifest> manifest_from_json(const nlohmann::json& j);
void write_manifest(const std::filesystem::path& path,
                    const std::vector<ClipManifest>& records);
/// Accepts the manifest file or the dataset directory holding it.
std::vector<ClipManifest> read_manifest(const std::filesystem::path& path);

}  // namespace uamqa
