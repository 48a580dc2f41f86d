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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "turnlens/corpus.h"
#include "turnlens/turntaking.h"

namespace turnlens {

/// Log-normal duration law in log-seconds. sigma = 0 gives the fixed
/// duration exp(mu).
struct DurationModel {
  double mu = 0.0;
  double sigma = 0.5;
};

/// Label law of a profile: a fixed value, unlabeled, or a Bernoulli draw.
struct LabelLaw {
  enum class Kind { kNone, kFixed, kRandom } kind = Kind::kNone;
  bool fixed_positive = false;    // member / yes
  double positive_probability = 0.5;
};

/// Markov chain over segment types plus duration laws. Transition rows may
/// only put mass on realizable successors (see is_realizable_successor).
struct Profile {
  using Row = std::array<double, kNumSegmentTypes>;

  std::string name = "profile";
  double weight = 1.0;
  Row initial{};  // mass on S1, S2 or S3 only
  std::array<Row, kNumSegmentTypes> transitions{};
  std::array<DurationModel, kNumSegmentTypes> durations{};
  double target_duration = 120.0;  // seconds
  LabelLaw request;                // positive = member
  LabelLaw complaint;              // positive = yes
};

struct SynthConfig {
  std::vector<Profile> profiles;
  double merge_gap = kDefaultMergeGap;
  double words_per_second = 2.5;
  double train_fraction = 0.5;
};

/// Throws InvalidArgument describing the first violated constraint.
void validate(const Profile& profile);
void validate(const SynthConfig& config);

SynthConfig parse_synth_config(std::string_view document);
SynthConfig load_synth_config(const std::filesystem::path& path);
std::string synth_config_to_json(const SynthConfig& config);

struct GeneratedConversation {
  std::vector<Talkspurt> customer;
  std::vector<Talkspurt> agent;
  SegmentSequence segments;  // the walked chain
  std::optional<RequestLabel> request;
  std::optional<bool> complaint;
};

/// Walks the profile's chain, draws durations (rounded to whole
/// milliseconds and floored at merge_gap) and rebuilds both channels'
/// talkspurts. Relabeling the talkspurts reproduces `segments` exactly.
GeneratedConversation generate_conversation(const Profile& profile, std::uint64_t seed,
                                            double merge_gap = kDefaultMergeGap);

/// Wraps generated talkspurts as utterances with placeholder text.
Conversation to_conversation(const GeneratedConversation& gen, std::string id, Split split,
                             double words_per_second, std::uint64_t seed);

/// Stream seed for conversation `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Writes n conversations plus manifest.json under out_dir. Profile counts
/// follow the mixture weights (largest remainder), and each profile is
/// split train/devel by train_fraction. Returns the manifest entries.
std::vector<ManifestEntry> generate_dataset(const SynthConfig& config, std::size_t n, std::uint64_t seed,
                                            const std::filesystem::path& out_dir, unsigned jobs = 1);

/// Two-profile complaint set: identical except the S5/S7 pause durations,
/// whose log-means differ by log(pause_factor). Request labels are a fair
/// coin in both, so the request task carries no signal.
SynthConfig two_profile_config(double pause_factor = 3.0, double target_duration = 180.0);

}  // namespace turnlens
