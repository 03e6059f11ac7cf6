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
#include <span>
#include <vector>

#include "uamqa/io.hpp"
#include "uamqa/video.hpp"

namespace uamqa {

// Thermal sequence file (.tsf), little-endian:
//   "TSF1" | u16 version | u32 width | u32 height | u32 frame_count |
//   u16 bit_depth (16) | f32 min_c | f32 max_c | frame_count row-major
//   rasters of u16 counts, mapping linearly onto [min_c, max_c].

inline constexpr std::uint16_t kTsfVersion = 1;

struct ThermalSequence {
  std::uint16_t version = kTsfVersion;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint16_t bit_depth = 16;
  float min_c = 0.0f;
  float max_c = 250.0f;
  std::vector<std::uint16_t> counts;

  std::size_t frame_count() const {
    const std::size_t plane = std::size_t{width} * height;
    return plane == 0 ? 0 : counts.size() / plane;
  }
};

Bytes encode_tsf(const ThermalSequence& seq);
ThermalSequence decode_tsf(std::span<const std::byte> bytes);

void write_tsf(const std::filesystem::path& path, const ThermalSequence& seq);
ThermalSequence read_tsf(const std::filesystem::path& path);

/// Temperatures to counts: round((t - min) / (max - min) * 65535), clamped.
ThermalSequence quantize(const VideoClip& clip);
/// Counts to temperatures: min + count / 65535 * (max - min).
VideoClip to_clip(const ThermalSequence& seq, double fps = 32.0);

}  // namespace uamqa
