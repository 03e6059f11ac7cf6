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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "uamqa/errors.hpp"
#include "uamqa/pca.hpp"
#include "uamqa/synthgen.hpp"

namespace uamqa {
namespace {

double frobenius(const VideoClip& a) {
  double s = 0.0;
  for (const Frame& f : a.frames)
    for (const double v : f.pixels()) s += v * v;
  return std::sqrt(s);
}

double frobenius_diff(const VideoClip& a, const VideoClip& b) {
  double s = 0.0;
  for (std::size_t f = 0; f < a.frame_count(); ++f) {
    const auto pa = a.frames[f].pixels(), pb = b.frames[f].pixels();
    for (std::size_t i = 0; i < pa.size(); ++i) s += (pa[i] - pb[i]) * (pa[i] - pb[i]);
  }
  return std::sqrt(s);
}

VideoClip noisy_clip(std::size_t frames) {
  ClipSpec s = ClipSpec::desk();
  s.width = 48;
  s.height = 40;
  s.n_frames = frames;
  s.seed = 17;
  return generate_clip(s).clip;
}

// x(t) = a(t) * P + b(t) * Q + c: two spatial patterns with time-varying
// weights on a constant offset.
VideoClip rank_two_clip(std::size_t w, std::size_t h, std::size_t frames) {
  VideoClip clip;
  clip.width = w;
  clip.height = h;
  for (std::size_t t = 0; t < frames; ++t) {
    const double a = std::sin(0.7 * static_cast<double>(t) + 0.3);
    const double b = std::cos(1.3 * static_cast<double>(t)) + 0.1 * static_cast<double>(t);
    Frame f(w, h);
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) {
        const double p = std::exp(-((x - 10.0) * (x - 10.0) + (y - 8.0) * (y - 8.0)) / 20.0);
        const double q = std::cos(0.3 * static_cast<double>(x)) * std::sin(0.2 * static_cast<double>(y));
        f.at(x, y) = 25.0 + 40.0 * a * p + 15.0 * b * q;
      }
    clip.frames.push_back(std::move(f));
  }
  return clip;
}

TEST(RetainedComponents, CountModeUsesCeiling) {
  const std::vector<double> sv(10, 1.0);
  PcaConfig c;
  c.retain_fraction = 0.8;
  EXPECT_EQ(retained_components(sv, c), 8u);
  c.retain_fraction = 0.25;
  EXPECT_EQ(retained_components(sv, c), 3u);
  c.retain_fraction = 0.01;
  EXPECT_EQ(retained_components(sv, c), 1u);
  c.retain_fraction = 1.0;
  EXPECT_EQ(retained_components(sv, c), 10u);
  const std::vector<double> five(5, 1.0);
  c.retain_fraction = 0.6;
  EXPECT_EQ(retained_components(five, c), 3u);
}

TEST(RetainedComponents, VarianceModeKeepsSmallestSufficientSet) {
  const std::vector<double> sv{3.0, 2.0, 1.0};  // variances 9, 4, 1 of 14
  PcaConfig c;
  c.mode = PcaMode::Variance;
  c.retain_fraction = 9.0 / 14.0;
  EXPECT_EQ(retained_components(sv, c), 1u);
  c.retain_fraction = 0.9;
  EXPECT_EQ(retained_components(sv, c), 2u);
  c.retain_fraction = 1.0;
  EXPECT_EQ(retained_components(sv, c), 3u);
}

TEST(PcaConfig, Validation) {
  PcaConfig c;
  EXPECT_EQ(c.retain_fraction, 0.8);
  EXPECT_EQ(c.mode, PcaMode::ComponentCount);
  EXPECT_TRUE(c.center);
  c.retain_fraction = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c.retain_fraction = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  EXPECT_EQ(pca_mode_from_string("variance"), PcaMode::Variance);
  EXPECT_THROW(pca_mode_from_string("energy"), ConfigError);
}

TEST(PcaDenoise, FullRetentionIsIdentity) {
  const VideoClip clip = noisy_clip(12);
  PcaConfig c;
  c.retain_fraction = 1.0;
  const VideoClip out = pca_denoise(clip, c);
  EXPECT_LT(frobenius_diff(out, clip) / frobenius(clip), 1e-9);
}

TEST(PcaDenoise, RankTwoClipRecoveredExactly) {
  const VideoClip clip = rank_two_clip(30, 20, 10);
  PcaConfig c;
  c.retain_fraction = 0.2;  // 2 of 10 components
  EXPECT_LT(frobenius_diff(pca_denoise(clip, c), clip) / frobenius(clip), 1e-9);
  c.mode = PcaMode::Variance;
  c.retain_fraction = 0.999999;
  EXPECT_LT(frobenius_diff(pca_denoise(clip, c), clip) / frobenius(clip), 1e-9);
  c.center = false;  // with the offset the uncentered clip has rank 3
  c.mode = PcaMode::ComponentCount;
  c.retain_fraction = 0.3;
  EXPECT_LT(frobenius_diff(pca_denoise(clip, c), clip) / frobenius(clip), 1e-9);
}

TEST(PcaDenoise, ErrorNonIncreasingInRetention) {
  const VideoClip clip = noisy_clip(20);
  double prev = std::numeric_limits<double>::infinity();
  for (const double f : {0.1, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0}) {
    PcaConfig c;
    c.retain_fraction = f;
    const double err = frobenius_diff(pca_denoise(clip, c), clip);
    EXPECT_LE(err, prev) << "retain " << f;
    prev = err;
  }
  PcaConfig half, dflt;
  half.retain_fraction = 0.5;
  const double e5 = frobenius_diff(pca_denoise(clip, half), clip);
  const double e8 = frobenius_diff(pca_denoise(clip, dflt), clip);
  EXPECT_LT(e8, e5);
  EXPECT_GT(e8, 0.0);
}

TEST(PcaDenoise, PreservesShapeAndMeanFrame) {
  const VideoClip clip = noisy_clip(10);
  const VideoClip out = pca_denoise(clip, PcaConfig{});
  ASSERT_EQ(out.frame_count(), clip.frame_count());
  EXPECT_EQ(out.width, clip.width);
  for (std::size_t i = 0; i < clip.frames[0].size(); i += 37) {
    double a = 0.0, b = 0.0;
    for (std::size_t f = 0; f < clip.frame_count(); ++f) {
      a += clip.frames[f].pixels()[i];
      b += out.frames[f].pixels()[i];
    }
    EXPECT_NEAR(a, b, 1e-9);
  }
}

TEST(PcaDenoise, SingleFrameIsDataError) {
  VideoClip clip = noisy_clip(3);
  clip.frames.resize(1);
  EXPECT_THROW(pca_denoise(clip, PcaConfig{}), DataError);
}

}  // namespace
}  // namespace uamqa
