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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "turnlens/corpus.h"

namespace turnlens {

/// Default pause length (seconds) below which consecutive utterances of a
/// channel are merged into one talkspurt.
inline constexpr double kDefaultMergeGap = 0.2;

struct Talkspurt {
  double start = 0.0;
  double end = 0.0;
  Channel channel = Channel::kCustomer;

  friend bool operator==(const Talkspurt&, const Talkspurt&) = default;
};

/// Timeline segment labels.
///   S1 customer alone          S2 agent alone
///   S3 overlap, agent joined   S4 overlap, customer joined
///   S5 pause agent -> customer S6 pause customer -> agent
///   S7 pause customer -> customer
///   S8 pause agent -> agent
enum class SegmentType : int { S1 = 1, S2, S3, S4, S5, S6, S7, S8 };

inline constexpr int kNumSegmentTypes = 8;

inline constexpr int type_index(SegmentType t) { return static_cast<int>(t) - 1; }
inline constexpr SegmentType type_from_index(int i) { return static_cast<SegmentType>(i + 1); }

std::string_view to_string(SegmentType t);
SegmentType parse_segment_type(std::string_view s);

inline constexpr bool is_speech(SegmentType t) { return type_index(t) < 4; }

/// True when `next` may directly follow `prev` on a labeled timeline.
bool is_valid_successor(SegmentType prev, SegmentType next);

/// True when the transition can be produced by label_segments from
/// talkspurts whose channel gaps are strictly positive. This is the table
/// the synthetic generator walks.
bool is_realizable_successor(SegmentType prev, SegmentType next);

struct Segment {
  SegmentType type = SegmentType::S1;
  double start = 0.0;
  double end = 0.0;

  double duration() const { return end - start; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct SegmentSequence {
  std::string conversation_id;
  std::vector<Segment> segments;

  friend bool operator==(const SegmentSequence&, const SegmentSequence&) = default;
};

/// Merges consecutive utterances whose gap is below merge_gap (with a 1e-9 s
/// tolerance for rounding in decimal timestamps).
std::vector<Talkspurt> build_talkspurts(std::span<const Utterance> utterances, Channel channel,
                                        double merge_gap = kDefaultMergeGap);

/// Sweep-line labeling of the two-channel timeline. Throws InvalidArgument
/// when both channels are empty.
SegmentSequence label_segments(std::span<const Talkspurt> customer,
                               std::span<const Talkspurt> agent);

/// build_talkspurts on both channels followed by label_segments.
SegmentSequence segment_conversation(const Conversation& conv, double merge_gap = kDefaultMergeGap);

std::string segments_to_json(const SegmentSequence& seq);
SegmentSequence segments_from_json(std::string_view document);

/// The 64 turn-taking features: six duration statistics per segment type
/// (Min, Max, Mean, Sd, K, Sk) followed by duration share T and count share N.
inline constexpr std::size_t kNumTTFeatures = 64;

class TTFeatureVector {
 public:
  static const std::array<std::string, kNumTTFeatures>& names();

  /// Position of a feature name, or throws InvalidArgument.
  static std::size_t index_of(std::string_view name);

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double at(std::string_view name) const { return values_[index_of(name)]; }

  const std::array<double, kNumTTFeatures>& values() const { return values_; }

 private:
  std::array<double, kNumTTFeatures> values_{};
};

/// Throws InvalidArgument on an empty sequence.
TTFeatureVector tt_features(const SegmentSequence& seq);

/// The six-feature complaint subset, in relevance order.
const std::vector<std::string>& default_ttc_names();

/// Values of the named features in the requested order.
std::vector<double> select_named(const TTFeatureVector& vec, std::span<const std::string> names);

}  // namespace turnlens
