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

#include "uamqa/tsf.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "uamqa/errors.hpp"

namespace uamqa {

namespace {

constexpr char kMagic[] = "TSF1";
constexpr double kMaxCount = 65535.0;

}  // namespace

Bytes encode_tsf(const ThermalSequence& seq) {
  const std::size_t plane = std::size_t{seq.width} * seq.height;
  if (plane == 0 || seq.counts.size() % plane != 0) {
    throw ShapeError("thermal sequence of " + std::to_string(seq.width) + "x" +
                     std::to_string(seq.height) + " holds " +
                     std::to_string(seq.counts.size()) +
                     " counts, not a whole number of frames");
  }
  if (seq.bit_depth != 16) {
    throw DataError("only 16-bit thermal sequences are supported");
  }
  ByteWriter w;
  w.put_text(std::string_view(kMagic, 4));
  w.put_u16(seq.version);
  w.put_u32(seq.width);
  w.put_u32(seq.height);
  w.put_u32(static_cast<std::uint32_t>(seq.frame_count()));
  w.put_u16(seq.bit_depth);
  w.put_f32(seq.min_c);
  w.put_f32(seq.max_c);
  w.put_bytes(std::as_bytes(std::span(seq.counts)));
  return w.take();
}

ThermalSequence decode_tsf(std::span<const std::byte> bytes) {
  ByteReader r(bytes, "tsf");
  if (r.get_text(4) != std::string_view(kMagic, 4)) {
    throw DataError("not a TSF file: bad magic");
  }
  ThermalSequence seq;
  seq.version = r.get_u16();
  if (seq.version != kTsfVersion) {
    throw DataError("unsupported TSF version " + std::to_string(seq.version));
  }
  seq.width = r.get_u32();
  seq.height = r.get_u32();
  const std::uint32_t frames = r.get_u32();
  seq.bit_depth = r.get_u16();
  if (seq.bit_depth != 16) {
    throw DataError("unsupported TSF bit depth " + std::to_string(seq.bit_depth));
  }
  seq.min_c = r.get_f32();
  seq.max_c = r.get_f32();
  if (!(seq.max_c > seq.min_c)) {
    throw DataError("TSF temperature range is empty");
  }
  const std::size_t n = std::size_t{seq.width} * seq.height * frames;
  auto raw = r.get_bytes(n * sizeof(std::uint16_t));
  seq.counts.resize(n);
  std::memcpy(seq.counts.data(), raw.data(), raw.size());
  if (r.remaining() != 0) {
    throw DataError("TSF has " + std::to_string(r.remaining()) +
                    " trailing bytes");
  }
  return seq;
}

void write_tsf(const std::filesystem::path& path, const ThermalSequence& seq) {
  write_file_atomic(path, encode_tsf(seq));
}

ThermalSequence read_tsf(const std::filesystem::path& path) {
  try {
    return decode_tsf(read_file_bytes(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

ThermalSequence quantize(const VideoClip& clip) {
  clip.validate();
  ThermalSequence seq;
  seq.width = static_cast<std::uint32_t>(clip.width);
  seq.height = static_cast<std::uint32_t>(clip.height);
  seq.min_c = static_cast<float>(clip.temp_range.min_c);
  seq.max_c = static_cast<float>(clip.temp_range.max_c);
  const double lo = seq.min_c;
  const double span = static_cast<double>(seq.max_c) - lo;
  seq.counts.reserve(clip.width * clip.height * clip.frame_count());
  for (const Frame& f : clip.frames) {
    for (const double t : f.pixels()) {
      const double u = std::clamp((t - lo) / span, 0.0, 1.0);
      seq.counts.push_back(static_cast<std::uint16_t>(std::lround(u * kMaxCount)));
    }
  }
  return seq;
}

VideoClip to_clip(const ThermalSequence& seq, double fps) {
  VideoClip clip;
  clip.width = seq.width;
  clip.height = seq.height;
  clip.fps = fps;
  clip.temp_range = {seq.min_c, seq.max_c};
  const double lo = seq.min_c;
  const double span = static_cast<double>(seq.max_c) - lo;
  const std::size_t plane = std::size_t{seq.width} * seq.height;
  for (std::size_t f = 0; f < seq.frame_count(); ++f) {
    std::vector<double> px(plane);
    for (std::size_t i = 0; i < plane; ++i) {
      px[i] = lo + static_cast<double>(seq.counts[f * plane + i]) / kMaxCount * span;
    }
    clip.frames.emplace_back(seq.width, seq.height, std::move(px));
  }
  return clip;
}

}  // namespace uamqa
