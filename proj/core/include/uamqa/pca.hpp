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

#include "uamqa/video.hpp"

namespace uamqa {

enum class PcaMode {
  ComponentCount,  // keep ceil(retain_fraction * k) components
  Variance,        // keep the fewest components explaining retain_fraction
};

std::string to_string(PcaMode mode);
PcaMode pca_mode_from_string(const std::string& text);

struct PcaConfig {
  double retain_fraction = 0.8;
  PcaMode mode = PcaMode::ComponentCount;
  bool center = true;

  void validate() const;
};

/// Number of leading components kept for the given singular values (sorted
/// descending). Always at least 1.
std::size_t retained_components(std::span<const double> singular_values,
                                const PcaConfig& config);

/// Frames become the columns of a pixels x frames matrix, which is centered
/// on the mean frame, factored by a thin SVD, truncated to the retained
/// components and reconstructed. Output has the input's shape and metadata.
/// Throws DataError for clips with fewer than two frames.
VideoClip pca_denoise(const VideoClip& clip, const PcaConfig& config);

}  // namespace uamqa
