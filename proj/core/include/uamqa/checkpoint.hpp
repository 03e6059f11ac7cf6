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

#include <nlohmann/json.hpp>

#include "uamqa/io.hpp"
#include "uamqa/model.hpp"

namespace uamqa {

// Checkpoint layout (little-endian):
//   "UAMC" | u16 version | u32 header length | JSON header | f32 parameters
// Parameters follow in declaration order, each tensor row-major.

inline constexpr std::uint16_t kCheckpointVersion = 1;

struct CheckpointInfo {
  ModelConfig config;
  std::uint64_t seed = 0;
  /// Free-form training metadata (scenario, class names, preprocessing).
  nlohmann::json training = nlohmann::json::object();
};

struct LoadedCheckpoint {
  Model<float> model;
  CheckpointInfo info;
};

nlohmann::json to_json(const ModelConfig& config);
ModelConfig model_config_from_json(const nlohmann::json& j);

Bytes encode_checkpoint(const Model<float>& model, const CheckpointInfo& info);
LoadedCheckpoint decode_checkpoint(std::span<const std::byte> bytes);

void save_checkpoint(const std::filesystem::path& path,
                     const Model<float>& model, const CheckpointInfo& info);
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace uamqa
