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

#include "uamqa/checkpoint.hpp"

#include <cstring>
#include <limits>

namespace uamqa {

using nlohmann::json;

namespace {

constexpr char kMagic[] = "UAMC";

json layer_to_json(const LayerSpec& l) {
  return {{"kind", to_string(l.kind)},       {"kernel_size", l.kernel_size},
          {"stride", l.stride},              {"padding", l.padding},
          {"dilation", l.dilation},          {"in_channels", l.in_channels},
          {"out_channels", l.out_channels}};
}

}  // namespace

json to_json(const ModelConfig& c) {
  return {{"input_channels", c.input_channels},
          {"input_height", c.input_height},
          {"input_width", c.input_width},
          {"conv1_out", c.conv1_out},
          {"conv2_out", c.conv2_out},
          {"hidden_width", c.hidden_width},
          {"num_classes", c.num_classes}};
}

ModelConfig model_config_from_json(const json& j) {
  try {
    ModelConfig c;
    c.input_channels = j.at("input_channels").get<std::size_t>();
    c.input_height = j.at("input_height").get<std::size_t>();
    c.input_width = j.at("input_width").get<std::size_t>();
    c.conv1_out = j.at("conv1_out").get<std::size_t>();
    c.conv2_out = j.at("conv2_out").get<std::size_t>();
    c.hidden_width = j.at("hidden_width").get<std::size_t>();
    c.num_classes = j.at("num_classes").get<std::size_t>();
    return c;
  } catch (const json::exception& e) {
    throw DataError(std::string("invalid model config: ") + e.what());
  }
}

Bytes encode_checkpoint(const Model<float>& model, const CheckpointInfo& info) {
  if (info.config != model.config()) {
    throw UsageError("checkpoint info describes a different model config");
  }
  json header;
  header["format"] = "uamqa-checkpoint";
  header["model_config"] = to_json(model.config());
  header["layers"] = json::array();
  for (const LayerSpec& l : model.layers()) {
    header["layers"].push_back(layer_to_json(l));
  }
  header["parameter_shapes"] = json::array();
  for (const Tensor& p : model.parameters()) {
    header["parameter_shapes"].push_back(p.shape());
  }
  header["precision"] = "f32";
  header["seed"] = info.seed;
  header["training"] = info.training;
  const std::string text = header.dump();
  if (text.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw DataError("checkpoint header too large");
  }

  ByteWriter w;
  w.put_text(std::string_view(kMagic, 4));
  w.put_u16(kCheckpointVersion);
  w.put_u32(static_cast<std::uint32_t>(text.size()));
  w.put_text(text);
  for (const Tensor& p : model.parameters()) {
    w.put_bytes(std::as_bytes(p.data()));
  }
  return w.take();
}

static LoadedCheckpoint decode_impl(std::span<const std::byte> bytes) {
  ByteReader r(bytes, "checkpoint");
  if (r.get_text(4) != std::string_view(kMagic, 4)) {
    throw DataError("not a checkpoint: bad magic");
  }
  const std::uint16_t version = r.get_u16();
  if (version != kCheckpointVersion) {
    throw DataError("unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint32_t header_len = r.get_u32();
  json header;
  try {
    header = json::parse(r.get_text(header_len));
  } catch (const json::parse_error& e) {
    throw DataError(std::string("checkpoint header is not valid JSON: ") +
                    e.what());
  }
  if (header.value("precision", "") != "f32") {
    throw DataError("checkpoint precision must be f32");
  }

  CheckpointInfo info;
  info.config = model_config_from_json(header.at("model_config"));
  info.seed = header.value("seed", std::uint64_t{0});
  info.training = header.value("training", json::object());

  Model<float> model(info.config);
  const json& shapes = header.at("parameter_shapes");
  if (shapes.size() != model.parameters().size()) {
    throw DataError("checkpoint lists " + std::to_string(shapes.size()) +
                    " parameter tensors, model needs " +
                    std::to_string(model.parameters().size()));
  }
  for (std::size_t i = 0; i < model.parameters().size(); ++i) {
    Tensor& p = model.parameters()[i];
    if (shapes[i].get<Shape>() != p.shape()) {
      throw DataError("checkpoint parameter " + std::to_string(i) + " has shape " +
                      shapes[i].dump() + ", model expects " +
                      shape_string(p.shape()));
    }
    auto raw = r.get_bytes(p.size() * sizeof(float));
    std::memcpy(p.raw(), raw.data(), raw.size());
  }
  if (r.remaining() != 0) {
    throw DataError("checkpoint has " + std::to_string(r.remaining()) +
                    " trailing bytes");
  }
  return {std::move(model), std::move(info)};
}

LoadedCheckpoint decode_checkpoint(std::span<const std::byte> bytes) {
  try {
    return decode_impl(bytes);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint header: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path,
                     const Model<float>& model, const CheckpointInfo& info) {
  write_file_atomic(path, encode_checkpoint(model, info));
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path) {
  try {
    return decode_checkpoint(read_file_bytes(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace uamqa
