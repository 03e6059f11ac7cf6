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

#include "uamqa/video.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "uamqa/errors.hpp"

namespace uamqa {

Frame::Frame(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), pixels_(width * height, fill) {}

Frame::Frame(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != width_ * height_) {
    throw ShapeError("frame of " + std::to_string(width_) + "x" +
                     std::to_string(height_) + " given " +
                     std::to_string(pixels_.size()) + " pixels");
  }
}

double Frame::max() const {
  return pixels_.empty() ? 0.0 : *std::max_element(pixels_.begin(), pixels_.end());
}

double Frame::min() const {
  return pixels_.empty() ? 0.0 : *std::min_element(pixels_.begin(), pixels_.end());
}

double Frame::mean() const {
  if (pixels_.empty()) return 0.0;
  return std::accumulate(pixels_.begin(), pixels_.end(), 0.0) /
         static_cast<double>(pixels_.size());
}

double VideoClip::max() const {
  double m = frames.empty() ? 0.0 : frames.front().max();
  for (const Frame& f : frames) m = std::max(m, f.max());
  return m;
}

void VideoClip::validate() const {
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (frames[i].width() != width || frames[i].height() != height) {
      throw ShapeError("frame " + std::to_string(i) + " is " +
                       std::to_string(frames[i].width()) + "x" +
                       std::to_string(frames[i].height()) + ", clip is " +
                       std::to_string(width) + "x" + std::to_string(height));
    }
  }
}

CropRect CropRect::centered(std::size_t width, std::size_t height,
                            std::size_t w, std::size_t h) {
  if (w > width || h > height) {
    throw ShapeError("cannot center a " + std::to_string(w) + "x" +
                     std::to_string(h) + " crop in a " + std::to_string(width) +
                     "x" + std::to_string(height) + " frame");
  }
  return {(width - w) / 2, (height - h) / 2, w, h};
}

CropRect CropRect::parse(const std::string& text) {
  std::size_t v[4];
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int i = 0; i < 4; ++i) {
    auto [next, ec] = std::from_chars(p, end, v[i]);
    if (ec != std::errc() || (i < 3 && (next == end || *next != ','))) {
      throw ConfigError("crop must be 'x,y,w,h', got '" + text + "'");
    }
    p = i < 3 ? next + 1 : next;
  }
  if (p != end) throw ConfigError("crop must be 'x,y,w,h', got '" + text + "'");
  if (v[2] == 0 || v[3] == 0) throw ConfigError("crop extents must be positive");
  return {v[0], v[1], v[2], v[3]};
}

std::string CropRect::to_string() const {
  return std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(w) +
         "," + std::to_string(h);
}

}  // namespace uamqa
