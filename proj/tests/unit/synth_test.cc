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

#include <cmath>
#include <fstream>
#include <map>

#include "doctest.h"
#include "generators.h"
#include "turnlens/error.h"
#include "turnlens/synth.h"

using namespace turnlens;
using S = SegmentType;

namespace {

Profile clean_turns() {
  Profile p;
  p.initial[type_index(S::S1)] = 1.0;
  p.transitions[type_index(S::S1)][type_index(S::S6)] = 1.0;
  p.transitions[type_index(S::S6)][type_index(S::S2)] = 1.0;
  p.transitions[type_index(S::S2)][type_index(S::S5)] = 1.0;
  p.transitions[type_index(S::S5)][type_index(S::S1)] = 1.0;
  // Rows for unreachable states still need to be distributions.
  p.transitions[type_index(S::S3)][type_index(S::S1)] = 1.0;
  p.transitions[type_index(S::S4)][type_index(S::S1)] = 1.0;
  p.transitions[type_index(S::S7)][type_index(S::S1)] = 1.0;
  p.transitions[type_index(S::S8)][type_index(S::S2)] = 1.0;
  for (auto& d : p.durations) d = {std::log(1.0), 0.0};
  p.target_duration = 20.0;
  return p;
}

}  // namespace

TEST_CASE("a forced clean-turn chain alternates and round-trips") {
  const auto g = generate_conversation(clean_turns(), 1);
  REQUIRE(g.segments.segments.size() >= 5);
  const S cycle[] = {S::S1, S::S6, S::S2, S::S5};
  for (std::size_t i = 0; i < g.segments.segments.size(); ++i) {
    CHECK(g.segments.segments[i].type == cycle[i % 4]);
    CHECK(g.segments.segments[i].duration() == doctest::Approx(1.0));
  }
  CHECK(label_segments(g.customer, g.agent).segments == g.segments.segments);
}

TEST_CASE("generation is deterministic and round-trips for every seed") {
  const auto cfg = two_profile_config();
  for (const auto& p : cfg.profiles)
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto a = generate_conversation(p, seed);
      const auto b = generate_conversation(p, seed);
      CHECK(a.customer == b.customer);
      CHECK(a.agent == b.agent);
      CHECK(label_segments(a.customer, a.agent).segments == a.segments.segments);
      for (const auto* ch : {&a.customer, &a.agent})
        for (std::size_t i = 1; i < ch->size(); ++i)
          CHECK((*ch)[i].start - (*ch)[i - 1].end >= cfg.merge_gap - 1e-9);

      // Through the corpus schema: merging utterances restores the talkspurts.
      const auto conv = to_conversation(a, "c", Split::kTrain, cfg.words_per_second, seed);
      CHECK(segment_conversation(conv, cfg.merge_gap).segments == a.segments.segments);
    }
}

TEST_CASE("inflated S5/S7 durations shift Mean5 and Mean7 by the configured gap") {
  const double factor = 3.0;
  const auto cfg = two_profile_config(factor);
  const auto& control = cfg.profiles[0];
  const auto& complaint = cfg.profiles[1];
  for (S t : {S::S5, S::S7}) {
    const auto& d = control.durations[type_index(t)];
    const double expected = (factor - 1.0) * std::exp(d.mu + d.sigma * d.sigma / 2);
    const std::string name = "Mean" + std::to_string(static_cast<int>(t));
    double mc = 0, mp = 0;
    const int n = 500;
    for (int i = 0; i < n; ++i) {
      mc += tt_features(generate_conversation(control, derive_seed(1, i)).segments).at(name);
      mp += tt_features(generate_conversation(complaint, derive_seed(2, i)).segments).at(name);
    }
    const double gap = (mp - mc) / n;
    CHECK(std::fabs(gap - expected) <= 0.1 * expected);
  }
}

TEST_CASE("profile validation") {
  auto p = clean_turns();
  CHECK_NOTHROW(validate(p));
  p.transitions[type_index(S::S1)][type_index(S::S4)] = 0.5;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  p = clean_turns();
  p.initial[type_index(S::S6)] = 0.5;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
  p = clean_turns();
  p.durations[0].sigma = -1;
  CHECK_THROWS_AS(validate(p), InvalidArgument);
}

TEST_CASE("config JSON round trip") {
  const auto cfg = two_profile_config(2.5, 90.0);
  const auto back = parse_synth_config(synth_config_to_json(cfg));
  CHECK(synth_config_to_json(back) == synth_config_to_json(cfg));
  CHECK(back.profiles.size() == 2);
  CHECK(back.profiles[1].target_duration == 90.0);
}

TEST_CASE("generate_dataset") {
  auto cfg = two_profile_config(3.0, 60.0);
  SUBCASE("n=10 writes ten files and a manifest") {
    const auto dir = testing::scratch_dir("synth10");
    const auto entries = generate_dataset(cfg, 10, 5, dir);
    CHECK(entries.size() == 10);
    const auto m = load_manifest(dir / "manifest.json");
    CHECK(m.size() == 10);
  }
  SUBCASE("weights (1,0) use only the first profile") {
    cfg.profiles[0].weight = 1.0;
    cfg.profiles[1].weight = 0.0;
    const auto dir = testing::scratch_dir("synth_w");
    generate_dataset(cfg, 20, 5, dir);
    const auto m = load_manifest(dir / "manifest.json");
    for (Split s : {Split::kTrain, Split::kDevel}) CHECK(m.counts(s).complaint_yes == 0);
  }
  SUBCASE("1,200 conversations split 600/600 and are reproducible") {
    cfg.profiles[0].target_duration = cfg.profiles[1].target_duration = 20.0;
    const auto dir = testing::scratch_dir("synth1200");
    generate_dataset(cfg, 1200, 9, dir, 2);
    const auto m = load_manifest(dir / "manifest.json");
    CHECK(m.counts(Split::kTrain).entries == 600);
    CHECK(m.counts(Split::kDevel).entries == 600);
    CHECK(m.counts(Split::kTrain).complaint_yes == 300);
    CHECK(m.counts(Split::kDevel).complaint_yes == 300);

    const auto again = testing::scratch_dir("synth1200b");
    generate_dataset(cfg, 1200, 9, again, 1);
    auto read = [](const std::filesystem::path& p) {
      std::ifstream in(p, std::ios::binary);
      return std::string(std::istreambuf_iterator<char>(in), {});
    };
    CHECK(read(dir / "manifest.json") == read(again / "manifest.json"));
    CHECK(read(dir / "conversations" / "conv_000777.json") == read(again / "conversations" / "conv_000777.json"));
  }
  CHECK_THROWS_AS(generate_dataset(cfg, 1, 0, testing::scratch_dir("synth1")), InvalidArgument);
}
