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

#pragma once

#include <filesystem>

#include "turnlens/features.h"

namespace turnlens {

inline constexpr std::uint32_t kFeatureFormatVersion = 1;

/// FSET: little-endian "FSET", u32 version, u32 len + set name, u32 D,
/// u64 N, then N records of (u32 len + id, D x f32). Feature names go to
/// the sidecar "<path>.names.json".
void write_fset(const std::filesystem::path& path, const FeatureMatrix& m);
FeatureMatrix read_fset(const std::filesystem::path& path);

/// FRMX: little-endian "FRMX", u32 version, u32 D, u32 frame period (ms),
/// u64 T, u32 len + id, then T x D f32 row-major.
void write_frmx(const std::filesystem::path& path, const FrameMatrix& fm);
FrameMatrix read_frmx(const std::filesystem::path& path);

std::filesystem::path names_sidecar(const std::filesystem::path& fset_path);

/// Encoded size of an FRMX header for an id of the given byte length.
inline constexpr std::size_t frmx_header_size(std::size_t id_bytes) {
  return 4 + 4 + 4 + 4 + 8 + 4 + id_bytes;
}

}  // namespace turnlens
