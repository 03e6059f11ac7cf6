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
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace uamqa {

using Bytes = std::vector<std::byte>;

/// Writes to a sibling temporary file and renames it over `path`, so a
/// reader never observes a partially written file.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::byte> bytes);
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view text);

Bytes read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);

// Little-endian encoding helpers.
class ByteWriter {
 public:
  void put_bytes(std::span<const std::byte> b);
  void put_text(std::string_view s);
  void put_u16(std::uint16_t v);
  void put_u32(std::uint32_t v);
  void put_f32(float v);

  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class ByteReader {
 public:
  ByteReader(std::span<const std::byte> data, std::string what)
      : data_(data), what_(std::move(what)) {}

  std::span<const std::byte> get_bytes(std::size_t n);
  std::string get_text(std::size_t n);
  std::uint16_t get_u16();
  std::uint32_t get_u32();
  float get_f32();

  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::span<const std::byte> data_;
  std::size_t pos_ = 0;
  std::string what_;
};

}  // namespace uamqa
