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

#include <algorithm>

#include "turnlens/error.h"
#include "turnlens/moments.h"
#include "turnlens/turntaking.h"

namespace turnlens {

namespace {

// Feature layout: blocks of eight, one entry per segment type.
enum Block { kMin, kMax, kMean, kSd, kKurt, kSkew, kShareT, kShareN, kNumBlocks };
constexpr std::array<std::string_view, kNumBlocks> kBlockNames = {"Min", "Max", "Mean", "Sd",
                                                                  "K",   "Sk",  "T",    "N"};

constexpr std::size_t slot(Block b, int type_idx) {
  return static_cast<std::size_t>(b) * kNumSegmentTypes + static_cast<std::size_t>(type_idx);
}

}  // namespace

const std::array<std::string, kNumTTFeatures>& TTFeatureVector::names() {
  static const auto table = [] {
    std::array<std::string, kNumTTFeatures> n;
    for (int b = 0; b < kNumBlocks; ++b)
      for (int t = 0; t < kNumSegmentTypes; ++t)
        n[slot(static_cast<Block>(b), t)] = std::string(kBlockNames[b]) + std::to_string(t + 1);
    return n;
  }();
  return table;
}

std::size_t TTFeatureVector::index_of(std::string_view name) {
  const auto& n = names();
  auto it = std::find(n.begin(), n.end(), name);
  if (it == n.end()) throw InvalidArgument("unknown turn-taking feature '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - n.begin());
}

TTFeatureVector tt_features(const SegmentSequence& seq) {
  if (seq.segments.empty()) throw InvalidArgument("tt_features: empty segment sequence");

  std::array<std::vector<double>, kNumSegmentTypes> durations;
  double total = 0.0;
  for (const auto& s : seq.segments) {
    durations[type_index(s.type)].push_back(s.duration());
    total += s.duration();
  }
  const double count = static_cast<double>(seq.segments.size());

  TTFeatureVector v;
  for (int t = 0; t < kNumSegmentTypes; ++t) {
    const auto& d = durations[t];
    if (d.empty()) continue;
    const Moments m = population_moments(std::span<const double>(d));
    double sum = 0.0;
    for (double x : d) sum += x;
    v[slot(kMin, t)] = *std::min_element(d.begin(), d.end());
    v[slot(kMax, t)] = *std::max_element(d.begin(), d.end());
    v[slot(kMean, t)] = m.mean;
    v[slot(kSd, t)] = m.sd;
    v[slot(kKurt, t)] = m.kurtosis;
    v[slot(kSkew, t)] = m.skewness;
    v[slot(kShareT, t)] = total > 0.0 ? sum / total : 0.0;
    v[slot(kShareN, t)] = static_cast<double>(d.size()) / count;
  }
  return v;
}

const std::vector<std::string>& default_ttc_names() {
  static const std::vector<std::string> names = {"T7", "Max7", "Sk5", "K5", "Mean7", "Mean5"};
  return names;
}

std::vector<double> select_named(const TTFeatureVector& vec, std::span<const std::string> names) {
  std::vector<double> out;
  out.reserve(names.size());
  for (const auto& n : names) out.push_back(vec.at(n));
  return out;
}

}  // namespace turnlens
