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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uamqa/pca.hpp"
#include "uamqa/tensor.hpp"
#include "uamqa/video.hpp"

namespace uamqa {

enum class FlipAxis { Horizontal, Vertical };
enum class NormalizeMode { SensorRange, MinMax };

std::string to_string(NormalizeMode mode);
NormalizeMode normalize_mode_from_string(const std::string& text);

/// Weld-detection threshold for trimming; the synthetic generator's ambient
/// is 25 C and every weld frame peaks well above this.
inline constexpr double kDefaultHotThresholdC = 60.0;

/// Restricts every frame to `rect`. Throws ShapeError if it leaves the frame.
VideoClip crop(const VideoClip& clip, const CropRect& rect);

/// Horizontal mirrors columns (left-right); vertical mirrors rows.
Frame flip(const Frame& frame, FlipAxis axis);

/// Inclusive [first, last] of the longest run of frames whose maximum is
/// >= threshold (earliest run on ties). Throws NoWeldDetected if none.
std::pair<std::size_t, std::size_t> weld_interval(const VideoClip& clip,
                                                  double hot_threshold_c);

/// Keeps only the frames of weld_interval().
VideoClip temporal_trim(const VideoClip& clip, double hot_threshold_c);

/// Maps a frame into [0, 1]. SensorRange: (t - min) / (max - min), clamped.
/// MinMax: per-frame affine stretch; a constant frame maps to all 0.5.
Frame normalize(const Frame& frame, NormalizeMode mode,
                const TemperatureRange& range);

struct PipelineConfig {
  /// Defaults to a centered 160x160 rectangle.
  std::optional<CropRect> crop;
  PcaConfig pca;
  bool pca_enabled = true;
  double hot_threshold_c = kDefaultHotThresholdC;
  NormalizeMode normalize = NormalizeMode::SensorRange;
  /// Also emit horizontally and vertically flipped copies of every frame.
  bool augment_flips = false;
  std::size_t channels = 3;

  CropRect crop_for(const VideoClip& clip) const {
    return crop ? *crop : CropRect::centered(clip.width, clip.height);
  }
};

/// Frame stage of the pipeline: trim -> crop -> PCA denoise. Errors are
/// rethrown with the failing stage prepended.
VideoClip prepare_clip(const VideoClip& clip, const PipelineConfig& config);

/// Full pipeline: prepare_clip, then normalize each frame and replicate it
/// into `channels` identical planes. Returns [channels, h, w] tensors.
std::vector<Tensor> preprocess_pipeline(const VideoClip& clip,
                                        const PipelineConfig& config);

/// Normalized single frame replicated into a [channels, h, w] tensor.
Tensor frame_to_tensor(const Frame& frame, std::size_t channels);

}  // namespace uamqa
