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
#include <cmath>
#include <limits>

#include "json.hpp"
#include "turnlens/error.h"
#include "turnlens/turntaking.h"

namespace turnlens {

namespace {

constexpr double kGapTolerance = 1e-9;

constexpr std::array<std::string_view, kNumSegmentTypes> kTypeNames = {"S1", "S2", "S3", "S4",
                                                                        "S5", "S6", "S7", "S8"};

// Bit i set in row r: type (i+1) may follow type (r+1).
constexpr unsigned bits(std::initializer_list<int> types) {
  unsigned b = 0;
  for (int t : types) b |= 1u << (t - 1);
  return b;
}

// Reconstructed transition table plus the two zero-gap hand-offs (S1<->S2)
// that arise when one channel stops exactly when the other starts.
constexpr std::array<unsigned, kNumSegmentTypes> kSuccessors = {
    bits({2, 3, 6, 7}),        // S1
    bits({1, 4, 5, 8}),        // S2
    bits({1, 2, 5, 6, 7, 8}),  // S3
    bits({1, 2, 5, 6, 7, 8}),  // S4
    bits({1, 3}),              // S5
    bits({2}),                 // S6
    bits({1, 3}),              // S7
    bits({2}),                 // S8
};

// Subset reachable under the floor-holder tie rules: after a joint stop the
// earlier starter holds the floor, so S3 (customer started first) can only
// fall into S6/S7 and S4 only into S5/S8.
constexpr std::array<unsigned, kNumSegmentTypes> kRealizable = {
    bits({2, 3, 6, 7}),  // S1
    bits({1, 4, 5, 8}),  // S2
    bits({1, 2, 6, 7}),  // S3
    bits({1, 2, 5, 8}),  // S4
    bits({1, 3}),        // S5
    bits({2}),           // S6
    bits({1, 3}),        // S7
    bits({2}),           // S8
};

SegmentType silence_type(Channel prev, Channel next) {
  if (prev == Channel::kAgent) return next == Channel::kCustomer ? SegmentType::S5 : SegmentType::S8;
  return next == Channel::kAgent ? SegmentType::S6 : SegmentType::S7;
}

}  // namespace

std::string_view to_string(SegmentType t) { return kTypeNames[type_index(t)]; }

SegmentType parse_segment_type(std::string_view s) {
  for (int i = 0; i < kNumSegmentTypes; ++i)
    if (kTypeNames[i] == s) return type_from_index(i);
  throw DataError("unknown segment type '" + std::string(s) + "'");
}

bool is_valid_successor(SegmentType prev, SegmentType next) {
  return (kSuccessors[type_index(prev)] >> type_index(next)) & 1u;
}

bool is_realizable_successor(SegmentType prev, SegmentType next) {
  return (kRealizable[type_index(prev)] >> type_index(next)) & 1u;
}

std::vector<Talkspurt> build_talkspurts(std::span<const Utterance> utterances, Channel channel,
                                        double merge_gap) {
  std::vector<Talkspurt> out;
  for (const auto& u : utterances) {
    if (!out.empty() && u.start - out.back().end < merge_gap - kGapTolerance) {
      out.back().end = std::max(out.back().end, u.end);
    } else {
      out.push_back({u.start, u.end, channel});
    }
  }
  return out;
}

SegmentSequence label_segments(std::span<const Talkspurt> customer, std::span<const Talkspurt> agent) {
  if (customer.empty() && agent.empty())
    throw InvalidArgument("label_segments: no talkspurt on either channel");

  std::vector<double> bounds;
  bounds.reserve(2 * (customer.size() + agent.size()));
  for (const auto& t : customer) bounds.insert(bounds.end(), {t.start, t.end});
  for (const auto& t : agent) bounds.insert(bounds.end(), {t.start, t.end});
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

  SegmentSequence seq;
  std::size_t ci = 0, ai = 0;  // first talkspurt per channel not yet finished
  for (std::size_t b = 0; b + 1 < bounds.size(); ++b) {
    const double t0 = bounds[b];
    const double t1 = bounds[b + 1];
    while (ci < customer.size() && customer[ci].end <= t0) ++ci;
    while (ai < agent.size() && agent[ai].end <= t0) ++ai;
    const bool c_on = ci < customer.size() && customer[ci].start <= t0;
    const bool a_on = ai < agent.size() && agent[ai].start <= t0;

    SegmentType type;
    if (c_on && a_on) {
      type = customer[ci].start > agent[ai].start ? SegmentType::S4 : SegmentType::S3;
    } else if (c_on) {
      type = SegmentType::S1;
    } else if (a_on) {
      type = SegmentType::S2;
    } else {
      const Talkspurt* c_prev = ci > 0 ? &customer[ci - 1] : nullptr;
      const Talkspurt* a_prev = ai > 0 ? &agent[ai - 1] : nullptr;
      const Talkspurt* c_next = ci < customer.size() ? &customer[ci] : nullptr;
      const Talkspurt* a_next = ai < agent.size() ? &agent[ai] : nullptr;
      if ((!c_prev && !a_prev) || (!c_next && !a_next)) continue;  // leading/trailing silence

      Channel prev;
      if (!a_prev) prev = Channel::kCustomer;
      else if (!c_prev) prev = Channel::kAgent;
      else if (c_prev->end != a_prev->end) prev = c_prev->end > a_prev->end ? Channel::kCustomer : Channel::kAgent;
      else prev = a_prev->start < c_prev->start ? Channel::kAgent : Channel::kCustomer;

      Channel next;
      if (!a_next) next = Channel::kCustomer;
      else if (!c_next) next = Channel::kAgent;
      else next = a_next->start < c_next->start ? Channel::kAgent : Channel::kCustomer;

      type = silence_type(prev, next);
    }

    if (!seq.segments.empty() && seq.segments.back().type == type && seq.segments.back().end == t0) {
      seq.segments.back().end = t1;
    } else {
      seq.segments.push_back({type, t0, t1});
    }
  }
  return seq;
}

SegmentSequence segment_conversation(const Conversation& conv, double merge_gap) {
  const auto c = build_talkspurts(conv.customer, Channel::kCustomer, merge_gap);
  const auto a = build_talkspurts(conv.agent, Channel::kAgent, merge_gap);
  SegmentSequence seq = label_segments(c, a);
  seq.conversation_id = conv.id;
  return seq;
}

std::string segments_to_json(const SegmentSequence& seq) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : seq.segments)
    arr.push_back({{"type", std::string(to_string(s.type))}, {"start", s.start}, {"end", s.end}});
  return arr.dump();
}

SegmentSequence segments_from_json(std::string_view document) {
  SegmentSequence seq;
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("segment document: ") + e.what());
  }
  if (!arr.is_array()) throw DataError("segment document: expected an array");
  for (const auto& s : arr) {
    if (!s.is_object() || !s.contains("type") || !s.contains("start") || !s.contains("end"))
      throw DataError("segment document: entries need type, start and end");
    seq.segments.push_back({parse_segment_type(s["type"].get<std::string>()), s["start"].get<double>(),
                            s["end"].get<double>()});
  }
  return seq;
}

}  // namespace turnlens
