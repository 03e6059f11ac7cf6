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

#include "uamqa/preprocess.hpp"

#include <algorithm>

#include "uamqa/errors.hpp"

namespace uamqa {

std::string to_string(NormalizeMode mode) {
  return mode == NormalizeMode::MinMax ? "minmax" : "sensor_range";
}

NormalizeMode normalize_mode_from_string(const std::string& text) {
  if (text == "sensor_range") return NormalizeMode::SensorRange;
  if (text == "minmax") return NormalizeMode::MinMax;
  throw ConfigError("normalize mode must be 'sensor_range' or 'minmax', got '" +
                    text + "'");
}

VideoClip crop(const VideoClip& clip, const CropRect& rect) {
  clip.validate();
  if (rect.w == 0 || rect.h == 0 || rect.x + rect.w > clip.width ||
      rect.y + rect.h > clip.height) {
    throw ShapeError("crop rect " + rect.to_string() + " (x,y,w,h) exceeds the " +
                     std::to_string(clip.width) + "x" +
                     std::to_string(clip.height) + " frame");
  }
  VideoClip out;
  out.width = rect.w;
  out.height = rect.h;
  out.fps = clip.fps;
  out.temp_range = clip.temp_range;
  out.frames.reserve(clip.frame_count());
  for (const Frame& f : clip.frames) {
    std::vector<double> px;
    px.reserve(rect.w * rect.h);
    for (std::size_t y = rect.y; y < rect.y + rect.h; ++y) {
      const auto row = f.pixels().subspan(y * f.width() + rect.x, rect.w);
      px.insert(px.end(), row.begin(), row.end());
    }
    out.frames.emplace_back(rect.w, rect.h, std::move(px));
  }
  return out;
}

Frame flip(const Frame& frame, FlipAxis axis) {
  Frame out(frame.width(), frame.height());
  const std::size_t w = frame.width(), h = frame.height();
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      out.at(x, y) = axis == FlipAxis::Horizontal ? frame.at(w - 1 - x, y)
                                                  : frame.at(x, h - 1 - y);
    }
  }
  return out;
}

std::pair<std::size_t, std::size_t> weld_interval(const VideoClip& clip,
                                                  double hot_threshold_c) {
  if (hot_threshold_c < clip.temp_range.min_c ||
      hot_threshold_c > clip.temp_range.max_c) {
    throw ConfigError("weld threshold " + std::to_string(hot_threshold_c) +
                      " C lies outside the sensor range");
  }
  std::size_t best_first = 0, best_len = 0;
  std::size_t run_first = 0, run_len = 0;
  for (std::size_t i = 0; i < clip.frame_count(); ++i) {
    if (clip.frames[i].max() >= hot_threshold_c) {
      if (run_len == 0) run_first = i;
      ++run_len;
      if (run_len > best_len) {
        best_len = run_len;
        best_first = run_first;
      }
    } else {
      run_len = 0;
    }
  }
  if (best_len == 0) throw NoWeldDetected(clip.max(), hot_threshold_c);
  return {best_first, best_first + best_len - 1};
}

VideoClip temporal_trim(const VideoClip& clip, double hot_threshold_c) {
  const auto [first, last] = weld_interval(clip, hot_threshold_c);
  VideoClip out = clip;
  out.frames.assign(clip.frames.begin() + static_cast<std::ptrdiff_t>(first),
                    clip.frames.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  return out;
}

Frame normalize(const Frame& frame, NormalizeMode mode,
                const TemperatureRange& range) {
  double lo = range.min_c, hi = range.max_c;
  if (mode == NormalizeMode::MinMax) {
    lo = frame.min();
    hi = frame.max();
    if (!(hi > lo)) return Frame(frame.width(), frame.height(), 0.5);
  } else if (!(hi > lo)) {
    throw ConfigError("sensor range normalization needs max_c > min_c");
  }
  Frame out(frame.width(), frame.height());
  const double span = hi - lo;
  auto dst = out.pixels();
  const auto src = frame.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = std::clamp((src[i] - lo) / span, 0.0, 1.0);
  }
  return out;
}

VideoClip prepare_clip(const VideoClip& clip, const PipelineConfig& config) {
  VideoClip c;
  try {
    c = temporal_trim(clip, config.hot_threshold_c);
  } catch (const NoWeldDetected& e) {
    throw NoWeldDetected(e.max_temperature_c(), config.hot_threshold_c);
  } catch (const DataError& e) {
    throw DataError(std::string("trim: ") + e.what());
  }
  try {
    c = crop(c, config.crop_for(clip));
  } catch (const ShapeError& e) {
    throw ShapeError(std::string("crop: ") + e.what());
  }
  if (config.pca_enabled) {
    try {
      c = pca_denoise(c, config.pca);
    } catch (const DataError& e) {
      throw DataError(std::string("pca: ") + e.what());
    }
  }
  return c;
}

Tensor frame_to_tensor(const Frame& frame, std::size_t channels) {
  Tensor t({channels, frame.height(), frame.width()});
  const auto px = frame.pixels();
  for (std::size_t c = 0; c < channels; ++c) {
    float* dst = t.raw() + c * px.size();
    for (std::size_t i = 0; i < px.size(); ++i) dst[i] = static_cast<float>(px[i]);
  }
  return t;
}

std::vector<Tensor> preprocess_pipeline(const VideoClip& clip,
                                        const PipelineConfig& config) {
  if (config.channels == 0) throw ConfigError("channel count must be positive");
  const VideoClip c = prepare_clip(clip, config);
  std::vector<Tensor> out;
  out.reserve(c.frame_count() * (config.augment_flips ? 3 : 1));
  for (const Frame& f : c.frames) {
    const Frame n = normalize(f, config.normalize, c.temp_range);
    out.push_back(frame_to_tensor(n, config.channels));
    if (config.augment_flips) {
      out.push_back(frame_to_tensor(flip(n, FlipAxis::Horizontal), config.channels));
      out.push_back(frame_to_tensor(flip(n, FlipAxis::Vertical), config.channels));
    }
  }
  return out;
}

}  // namespace uamqa
