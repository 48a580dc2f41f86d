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

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "turnlens/features.h"
#include "turnlens/synth.h"
#include "turnlens/turntaking.h"

namespace turnlens::testing {

/// Disjoint talkspurts on a millisecond grid, separated by >= 1 ms.
inline std::vector<Talkspurt> random_channel(std::mt19937_64& rng, std::size_t count, Channel ch,
                                             std::int64_t max_len_ms = 3000, std::int64_t max_gap_ms = 3000) {
  std::uniform_int_distribution<std::int64_t> len(1, max_len_ms), gap(1, max_gap_ms), first(0, max_gap_ms);
  std::vector<Talkspurt> out;
  std::int64_t t = first(rng);
  for (std::size_t i = 0; i < count; ++i) {
    const std::int64_t s = t;
    const std::int64_t e = s + len(rng);
    out.push_back({s / 1000.0, e / 1000.0, ch});
    t = e + gap(rng);
  }
  return out;
}

/// Fresh scratch directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("turnlens_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Two profiles whose S5/S7 pauses share the mean duration but differ in
/// spread by `sigma_factor`, so duration shares T_t carry no signal.
inline SynthConfig pause_shape_config(double sigma_factor = 2.5, double target_duration = 180.0) {
  auto cfg = two_profile_config(1.0, target_duration);
  for (SegmentType t : {SegmentType::S5, SegmentType::S7}) {
    auto& d = cfg.profiles[1].durations[type_index(t)];
    const double wide = d.sigma * sigma_factor;
    d.mu += 0.5 * (d.sigma * d.sigma - wide * wide);
    d.sigma = wide;
  }
  return cfg;
}

inline FeatureMatrix random_matrix(std::mt19937_64& rng, std::string name, std::size_t rows, std::size_t dim) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < dim; ++j) names.push_back("f" + std::to_string(j));
  FeatureMatrix m(std::move(name), names);
  std::normal_distribution<float> nd(0.0f, 2.0f);
  std::vector<float> row(dim);
  for (std::size_t i = 0; i < rows; ++i) {
    for (auto& v : row) v = nd(rng);
    m.add_row("id" + std::to_string(i), std::span<const float>(row));
  }
  return m;
}

}  // namespace turnlens::testing
