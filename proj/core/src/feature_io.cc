// Copyright (c) 2026 The TurnLens Authors. All Rights Reserved.
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

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "turnlens/error.h"
#include "turnlens/feature_io.h"

namespace turnlens {

namespace fs = std::filesystem;

namespace {

class Writer {
 public:
  void bytes(std::string_view s) { buf_.append(s); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void str(std::string_view s) {
    if (s.size() > std::numeric_limits<std::uint32_t>::max()) throw InvalidArgument("string too long");
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s);
  }
  const std::string& data() const { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  Reader(std::string data, std::string path) : data_(std::move(data)), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError("'" + path_ + "': " + what);
  }
  std::size_t remaining() const { return data_.size() - pos_; }
  void need(std::uint64_t n) const {
    if (n > remaining()) fail("truncated payload");
  }
  std::string_view bytes(std::size_t n) {
    need(n);
    std::string_view v(data_.data() + pos_, n);
    pos_ += n;
    return v;
  }
  std::uint32_t u32() {
    auto b = bytes(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    auto b = bytes(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::string str() {
    const std::uint32_t n = u32();
    return std::string(bytes(n));
  }
  void magic(std::string_view expected) {
    if (remaining() < expected.size() || bytes(expected.size()) != expected) fail("bad magic");
  }
  void version() {
    const std::uint32_t v = u32();
    if (v != kFeatureFormatVersion)
      fail("version mismatch: file has " + std::to_string(v) + ", reader supports " +
           std::to_string(kFeatureFormatVersion));
  }
  void finish() const {
    if (remaining() != 0) fail(std::to_string(remaining()) + " trailing bytes after payload");
  }

 private:
  std::string data_;
  std::string path_;
  std::size_t pos_ = 0;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

// a * b * 4 without wrapping; false on overflow.
bool payload_bytes(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max() / 4;
  if (a != 0 && b > kMax / a) return false;
  out = a * b * 4;
  return true;
}

}  // namespace

fs::path names_sidecar(const fs::path& fset_path) {
  fs::path p = fset_path;
  p += ".names.json";
  return p;
}

void write_fset(const fs::path& path, const FeatureMatrix& m) {
  if (m.dim() > std::numeric_limits<std::uint32_t>::max()) throw InvalidArgument("write_fset: dimension overflow");
  Writer w;
  w.bytes("FSET");
  w.u32(kFeatureFormatVersion);
  w.str(m.set_name());
  w.u32(static_cast<std::uint32_t>(m.dim()));
  w.u64(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    w.str(m.ids()[i]);
    for (float v : m.row(i)) {
      if (!std::isfinite(v))
        throw InvalidArgument("write_fset: non-finite value in row '" + m.ids()[i] + "'");
      w.f32(v);
    }
  }
  dump(path, w.data());
  dump(names_sidecar(path), nlohmann::json(m.feature_names()).dump() + "\n");
}

FeatureMatrix read_fset(const fs::path& path) {
  Reader r(slurp(path), path.string());
  r.magic("FSET");
  r.version();
  std::string name = r.str();
  const std::uint32_t d = r.u32();
  const std::uint64_t n = r.u64();
  std::uint64_t row_bytes = 0;
  if (!payload_bytes(d, 1, row_bytes)) r.fail("dimension overflow");
  // Each record carries at least a 4-byte id length.
  if (n > 0 && (row_bytes + 4) > std::numeric_limits<std::uint64_t>::max() / n) r.fail("dimension overflow");
  r.need(n * (row_bytes + 4));

  std::vector<std::string> names;
  const fs::path sidecar = names_sidecar(path);
  if (fs::exists(sidecar)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(slurp(sidecar));
      names = j.get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("'" + sidecar.string() + "': " + e.what());
    }
    if (names.size() != d)
      throw FormatError("'" + sidecar.string() + "': " + std::to_string(names.size()) +
                        " names for dimension " + std::to_string(d));
  } else {
    for (std::uint32_t j = 0; j < d; ++j) names.push_back("f" + std::to_string(j));
  }

  FeatureMatrix m(std::move(name), std::move(names));
  std::vector<float> buf(d);
  for (std::uint64_t i = 0; i < n; ++i) {
    std::string id = r.str();
    r.need(row_bytes);
    for (std::uint32_t j = 0; j < d; ++j) buf[j] = r.f32();
    m.add_row(std::move(id), std::span<const float>(buf));
  }
  r.finish();
  return m;
}

void write_frmx(const fs::path& path, const FrameMatrix& fm) {
  if (fm.dim == 0 || fm.frames.size() % fm.dim != 0)
    throw InvalidArgument("write_frmx: frames are not a multiple of the dimension");
  Writer w;
  w.bytes("FRMX");
  w.u32(kFeatureFormatVersion);
  w.u32(fm.dim);
  w.u32(fm.frame_period_ms);
  w.u64(fm.num_frames());
  w.str(fm.id);
  for (float v : fm.frames) {
    if (!std::isfinite(v)) throw InvalidArgument("write_frmx: non-finite frame value in '" + fm.id + "'");
    w.f32(v);
  }
  dump(path, w.data());
}

FrameMatrix read_frmx(const fs::path& path) {
  Reader r(slurp(path), path.string());
  r.magic("FRMX");
  r.version();
  FrameMatrix fm;
  fm.dim = r.u32();
  fm.frame_period_ms = r.u32();
  const std::uint64_t t = r.u64();
  fm.id = r.str();
  std::uint64_t bytes = 0;
  if (!payload_bytes(t, fm.dim, bytes) || bytes > std::numeric_limits<std::size_t>::max())
    r.fail("dimension overflow");
  r.need(bytes);
  fm.frames.resize(static_cast<std::size_t>(t) * fm.dim);
  for (auto& v : fm.frames) v = r.f32();
  r.finish();
  return fm;
}

}  // namespace turnlens
