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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace uamqa {

/// Sensor temperature scale in degrees Celsius.
struct TemperatureRange {
  double min_c = 0.0;
  double max_c = 250.0;

  friend bool operator==(const TemperatureRange&,
                         const TemperatureRange&) = default;
};

/// Row-major 2-D raster of temperatures (or normalized intensities).
class Frame {
 public:
  Frame() = default;
  Frame(std::size_t width, std::size_t height, double fill = 0.0);
  Frame(std::size_t width, std::size_t height, std::vector<double> pixels);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }

  double& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }
  double at(std::size_t x, std::size_t y) const {
    return pixels_[y * width_ + x];
  }

  std::span<double> pixels() { return pixels_; }
  std::span<const double> pixels() const { return pixels_; }

  double max() const;
  double min() const;
  double mean() const;

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> pixels_;
};

/// Ordered sequence of equally sized frames with acquisition metadata.
struct VideoClip {
  std::size_t width = 0;
  std::size_t height = 0;
  double fps = 32.0;
  TemperatureRange temp_range;
  std::vector<Frame> frames;

  std::size_t frame_count() const { return frames.size(); }
  /// Highest temperature over all frames.
  double max() const;
  /// Throws ShapeError if any frame disagrees with width/height.
  void validate() const;
};

/// Pixel rectangle; x/y is the top-left corner.
struct CropRect {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t w = 160;
  std::size_t h = 160;

  /// A w x h rectangle centered in a width x height frame.
  static CropRect centered(std::size_t width, std::size_t height,
                           std::size_t w = 160, std::size_t h = 160);
  /// Parses "x,y,w,h".
  static CropRect parse(const std::string& text);
  std::string to_string() const;

  friend bool operator==(const CropRect&, const CropRect&) = default;
};

}  // namespace uamqa
