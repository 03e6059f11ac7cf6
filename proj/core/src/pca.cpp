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

#include "uamqa/pca.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "uamqa/errors.hpp"

namespace uamqa {

std::string to_string(PcaMode mode) {
  return mode == PcaMode::Variance ? "variance" : "component_count";
}

PcaMode pca_mode_from_string(const std::string& text) {
  if (text == "component_count" || text == "count") return PcaMode::ComponentCount;
  if (text == "variance") return PcaMode::Variance;
  throw ConfigError("pca mode must be 'component_count' or 'variance', got '" +
                    text + "'");
}

void PcaConfig::validate() const {
  if (!(retain_fraction > 0.0 && retain_fraction <= 1.0)) {
    throw ConfigError("retain fraction must lie in (0, 1], got " +
                      std::to_string(retain_fraction));
  }
}

std::size_t retained_components(std::span<const double> singular_values,
                                 const PcaConfig& config) {
  config.validate();
  const std::size_t k = singular_values.size();
  if (k == 0) return 0;
  // Slack so that e.g. 0.6 * 5 = 3.0000000000000004 keeps 3, not 4.
  constexpr double kSlack = 1e-9;
  if (config.mode == PcaMode::ComponentCount) {
    const double want = std::ceil(config.retain_fraction * static_cast<double>(k) - kSlack);
    return std::clamp<std::size_t>(static_cast<std::size_t>(want), 1, k);
  }
  double total = 0.0;
  for (const double s : singular_values) total += s * s;
  if (total <= 0.0) return 1;
  double acc = 0.0;
  for (std::size_t m = 0; m < k; ++m) {
    acc += singular_values[m] * singular_values[m];
    if (acc >= (config.retain_fraction - kSlack) * total) return m + 1;
  }
  return k;
}

VideoClip pca_denoise(const VideoClip& clip, const PcaConfig& config) {
  config.validate();
  clip.validate();
  if (clip.frame_count() < 2) {
    throw DataError("PCA denoising needs at least 2 frames, clip has " +
                    std::to_string(clip.frame_count()));
  }
  const auto pixels = static_cast<Eigen::Index>(clip.width * clip.height);
  const auto frames = static_cast<Eigen::Index>(clip.frame_count());

  Eigen::MatrixXd x(pixels, frames);
  for (Eigen::Index f = 0; f < frames; ++f) {
    const auto px = clip.frames[static_cast<std::size_t>(f)].pixels();
    x.col(f) = Eigen::Map<const Eigen::VectorXd>(px.data(), pixels);
  }
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(pixels);
  if (config.center) {
    mean = x.rowwise().mean();
    x.colwise() -= mean;
  }

  // Thin SVD: at most `frames` components, no pixels x pixels covariance.
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const std::size_t keep =
      retained_components(std::span(sv.data(), static_cast<std::size_t>(sv.size())), config);
  const auto m = static_cast<Eigen::Index>(keep);

  Eigen::MatrixXd recon = svd.matrixU().leftCols(m) *
                          sv.head(m).asDiagonal() *
                          svd.matrixV().leftCols(m).transpose();
  if (config.center) recon.colwise() += mean;

  VideoClip out = clip;
  for (Eigen::Index f = 0; f < frames; ++f) {
    auto px = out.frames[static_cast<std::size_t>(f)].pixels();
    Eigen::Map<Eigen::VectorXd>(px.data(), pixels) = recon.col(f);
  }
  return out;
}

}  // namespace uamqa
