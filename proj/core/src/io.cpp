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

#include "uamqa/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <random>

#include "uamqa/errors.hpp"

namespace uamqa {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, std::span<const std::byte> bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(std::random_device{}());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw DataError("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw DataError("cannot move " + tmp.string() + " to " + path.string() +
                    ": " + ec.message());
  }
}

void write_file_atomic(const fs::path& path, std::string_view text) {
  write_file_atomic(path, std::as_bytes(std::span(text.data(), text.size())));
}

Bytes read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0);
  Bytes out(size);
  in.read(reinterpret_cast<char*>(out.data()),
          static_cast<std::streamsize>(size));
  if (!in) throw DataError("failed reading " + path.string());
  return out;
}

std::string read_file_text(const fs::path& path) {
  const Bytes b = read_file_bytes(path);
  return std::string(reinterpret_cast<const char*>(b.data()), b.size());
}

static_assert(std::endian::native == std::endian::little,
              "byte encoding assumes a little-endian host");

void ByteWriter::put_bytes(std::span<const std::byte> b) {
  out_.insert(out_.end(), b.begin(), b.end());
}
void ByteWriter::put_text(std::string_view s) {
  put_bytes(std::as_bytes(std::span(s.data(), s.size())));
}
void ByteWriter::put_u16(std::uint16_t v) {
  put_bytes(std::as_bytes(std::span(&v, 1)));
}
void ByteWriter::put_u32(std::uint32_t v) {
  put_bytes(std::as_bytes(std::span(&v, 1)));
}
void ByteWriter::put_f32(float v) {
  put_bytes(std::as_bytes(std::span(&v, 1)));
}

std::span<const std::byte> ByteReader::get_bytes(std::size_t n) {
  if (remaining() < n) {
    throw DataError(what_ + ": truncated (needed " + std::to_string(n) +
                    " bytes at offset " + std::to_string(pos_) + ", have " +
                    std::to_string(remaining()) + ")");
  }
  auto s = data_.subspan(pos_, n);
  pos_ += n;
  return s;
}
std::string ByteReader::get_text(std::size_t n) {
  auto b = get_bytes(n);
  return std::string(reinterpret_cast<const char*>(b.data()), b.size());
}
std::uint16_t ByteReader::get_u16() {
  std::uint16_t v;
  std::memcpy(&v, get_bytes(sizeof v).data(), sizeof v);
  return v;
}
std::uint32_t ByteReader::get_u32() {
  std::uint32_t v;
  std::memcpy(&v, get_bytes(sizeof v).data(), sizeof v);
  return v;
}
float ByteReader::get_f32() {
  float v;
  std::memcpy(&v, get_bytes(sizeof v).data(), sizeof v);
  return v;
}

}  // namespace uamqa
