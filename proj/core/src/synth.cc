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
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"
#include "turnlens/error.h"
#include "turnlens/parallel.h"
#include "turnlens/synth.h"

namespace turnlens {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kRowTolerance = 1e-9;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return std::generate_canonical<double, 64>(rng); }

int sample_row(const Profile::Row& row, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  int last = -1;
  for (int i = 0; i < kNumSegmentTypes; ++i) {
    if (row[i] <= 0.0) continue;
    acc += row[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

std::int64_t sample_ms(const DurationModel& m, std::int64_t floor_ms, std::mt19937_64& rng) {
  double log_d = m.mu;
  if (m.sigma > 0.0) log_d += m.sigma * std::normal_distribution<double>(0.0, 1.0)(rng);
  const auto ms = static_cast<std::int64_t>(std::llround(std::exp(log_d) * 1000.0));
  return std::max(ms, floor_ms);
}

std::optional<bool> draw_label(const LabelLaw& law, std::mt19937_64& rng) {
  switch (law.kind) {
    case LabelLaw::Kind::kNone: return std::nullopt;
    case LabelLaw::Kind::kFixed: return law.fixed_positive;
    case LabelLaw::Kind::kRandom: return uniform01(rng) < law.positive_probability;
  }
  return std::nullopt;
}

bool speaks(SegmentType t, Channel c) {
  switch (t) {
    case SegmentType::S1: return c == Channel::kCustomer;
    case SegmentType::S2: return c == Channel::kAgent;
    case SegmentType::S3:
    case SegmentType::S4: return true;
    default: return false;
  }
}

const std::array<std::string_view, 16> kVocabulary = {
    "bonjour", "madame", "monsieur", "dossier", "remboursement", "contrat", "adhesion", "oui",
    "non",     "merci",  "attendez", "carte",   "mutuelle",      "soins",   "<NAME>",   "<IBAN>"};

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

void validate(const Profile& p) {
  auto fail = [&](const std::string& what) { throw InvalidArgument("profile '" + p.name + "': " + what); };
  double init_sum = 0.0;
  for (int i = 0; i < kNumSegmentTypes; ++i) {
    if (p.initial[i] < 0.0) fail("negative initial probability");
    if (p.initial[i] > 0.0 && i > 2) fail("initial mass allowed on S1, S2 or S3 only");
    init_sum += p.initial[i];
  }
  if (std::fabs(init_sum - 1.0) > kRowTolerance) fail("initial distribution does not sum to 1");
  for (int r = 0; r < kNumSegmentTypes; ++r) {
    double sum = 0.0;
    for (int c = 0; c < kNumSegmentTypes; ++c) {
      const double v = p.transitions[r][c];
      if (v < 0.0) fail("negative transition probability");
      if (v > 0.0 && !is_realizable_successor(type_from_index(r), type_from_index(c)))
        fail("transition " + std::string(to_string(type_from_index(r))) + "->" +
             std::string(to_string(type_from_index(c))) + " is not allowed");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > kRowTolerance)
      fail("transition row " + std::string(to_string(type_from_index(r))) + " does not sum to 1");
  }
  for (const auto& d : p.durations)
    if (!(d.sigma >= 0.0) || !std::isfinite(d.mu) || !std::isfinite(d.sigma)) fail("invalid duration law");
  if (!(p.target_duration > 0.0)) fail("target duration must be positive");
  for (const LabelLaw* law : {&p.request, &p.complaint})
    if (law->kind == LabelLaw::Kind::kRandom && !(law->positive_probability >= 0.0 && law->positive_probability <= 1.0))
      fail("label probability outside [0, 1]");
  if (!(p.weight >= 0.0)) fail("negative mixture weight");
}

void validate(const SynthConfig& config) {
  if (config.profiles.empty()) throw InvalidArgument("synth config: no profile");
  double w = 0.0;
  for (const auto& p : config.profiles) {
    validate(p);
    w += p.weight;
  }
  if (std::fabs(w - 1.0) > 1e-6) throw InvalidArgument("synth config: mixture weights must sum to 1");
  if (!(config.merge_gap >= 0.0)) throw InvalidArgument("synth config: merge_gap must be >= 0");
  if (!(config.words_per_second > 0.0)) throw InvalidArgument("synth config: words_per_second must be > 0");
  if (!(config.train_fraction >= 0.0 && config.train_fraction <= 1.0))
    throw InvalidArgument("synth config: train_fraction outside [0, 1]");
}

GeneratedConversation generate_conversation(const Profile& profile, std::uint64_t seed, double merge_gap) {
  validate(profile);
  std::mt19937_64 rng(seed);
  const std::int64_t floor_ms = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(merge_gap * 1000.0 - 1e-9)));
  const auto target_ms = static_cast<std::int64_t>(std::llround(profile.target_duration * 1000.0));

  GeneratedConversation gen;
  std::vector<std::pair<std::int64_t, std::int64_t>> bounds;  // ms
  std::vector<SegmentType> types;
  std::int64_t t = 0;
  int state = sample_row(profile.initial, rng);
  for (;;) {
    const auto type = type_from_index(state);
    const std::int64_t d = sample_ms(profile.durations[state], floor_ms, rng);
    types.push_back(type);
    bounds.emplace_back(t, t + d);
    t += d;
    if (t >= target_ms && is_speech(type)) break;
    state = sample_row(profile.transitions[state], rng);
  }

  auto sec = [](std::int64_t ms) { return static_cast<double>(ms) / 1000.0; };
  for (std::size_t k = 0; k < types.size(); ++k)
    gen.segments.segments.push_back({types[k], sec(bounds[k].first), sec(bounds[k].second)});

  for (Channel ch : {Channel::kCustomer, Channel::kAgent}) {
    auto& out = ch == Channel::kCustomer ? gen.customer : gen.agent;
    std::optional<std::int64_t> open;
    for (std::size_t k = 0; k < types.size(); ++k) {
      const bool on = speaks(types[k], ch);
      if (on && !open) open = bounds[k].first;
      if (!on && open) {
        out.push_back({sec(*open), sec(bounds[k].first), ch});
        open.reset();
      }
    }
    if (open) out.push_back({sec(*open), sec(bounds.back().second), ch});
  }

  if (auto r = draw_label(profile.request, rng)) gen.request = *r ? RequestLabel::kMember : RequestLabel::kProcess;
  gen.complaint = draw_label(profile.complaint, rng);
  return gen;
}

Conversation to_conversation(const GeneratedConversation& gen, std::string id, Split split,
                             double words_per_second, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
  auto utterances = [&](const std::vector<Talkspurt>& spurts) {
    std::vector<Utterance> out;
    for (const auto& s : spurts) {
      const auto words = std::max<long long>(1, std::llround((s.end - s.start) * words_per_second));
      std::string text;
      for (long long w = 0; w < words; ++w) {
        if (w) text += ' ';
        text += kVocabulary[rng() % kVocabulary.size()];
      }
      out.push_back({s.start, s.end, std::move(text)});
    }
    return out;
  };
  Conversation conv;
  conv.id = std::move(id);
  conv.customer = utterances(gen.customer);
  conv.agent = utterances(gen.agent);
  conv.request = gen.request;
  conv.complaint = gen.complaint;
  conv.split = split;
  return conv;
}

std::vector<ManifestEntry> generate_dataset(const SynthConfig& config, std::size_t n, std::uint64_t seed,
                                            const fs::path& out_dir, unsigned jobs) {
  validate(config);
  if (n < 2) throw InvalidArgument("generate_dataset: need at least two conversations");

  // Largest-remainder apportionment of n over the mixture weights.
  const std::size_t k = config.profiles.size();
  std::vector<std::size_t> counts(k);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t p = 0; p < k; ++p) {
    const double exact = config.profiles[p].weight * static_cast<double>(n);
    counts[p] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[p];
    remainders.emplace_back(exact - std::floor(exact), p);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++counts[remainders[r % k].second];

  struct Slot {
    std::size_t profile;
    Split split;
  };
  std::vector<Slot> slots;
  for (std::size_t p = 0; p < k; ++p) {
    const auto train = static_cast<std::size_t>(std::llround(config.train_fraction * static_cast<double>(counts[p])));
    for (std::size_t i = 0; i < counts[p]; ++i) slots.push_back({p, i < train ? Split::kTrain : Split::kDevel});
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i + 1 < slots.size(); ++i)
    std::swap(slots[i], slots[i + static_cast<std::size_t>(rng() % (slots.size() - i))]);

  const fs::path conv_dir = out_dir / "conversations";
  fs::create_directories(conv_dir);
  std::vector<ManifestEntry> entries(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    char name[32];
    std::snprintf(name, sizeof name, "conv_%06zu", i);
    const std::uint64_t s = derive_seed(seed, i);
    const auto& profile = config.profiles[slots[i].profile];
    const auto gen = generate_conversation(profile, s, config.merge_gap);
    const fs::path path = conv_dir / (std::string(name) + ".json");
    save_conversation(path, to_conversation(gen, name, slots[i].split, config.words_per_second, s));
    entries[i] = {name, path, slots[i].split};
  });
  save_manifest(out_dir / "manifest.json", entries);
  return entries;
}

namespace {

json row_to_json(const Profile::Row& row) {
  json o = json::object();
  for (int i = 0; i < kNumSegmentTypes; ++i)
    if (row[i] > 0.0) o[std::string(to_string(type_from_index(i)))] = row[i];
  return o;
}

Profile::Row row_from_json(const json& o) {
  Profile::Row row{};
  if (!o.is_object()) throw DataError("synth config: distribution must be an object");
  for (const auto& [key, value] : o.items()) row[type_index(parse_segment_type(key))] = value.get<double>();
  return row;
}

json label_to_json(const LabelLaw& law, const char* positive, const char* negative, bool boolean) {
  switch (law.kind) {
    case LabelLaw::Kind::kNone: return nullptr;
    case LabelLaw::Kind::kFixed:
      if (boolean) return law.fixed_positive;
      return law.fixed_positive ? positive : negative;
    case LabelLaw::Kind::kRandom: return json{{positive, law.positive_probability}};
  }
  return nullptr;
}

LabelLaw label_from_json(const json& j, const char* positive, const char* negative) {
  LabelLaw law;
  if (j.is_null()) return law;
  if (j.is_boolean()) {
    law.kind = LabelLaw::Kind::kFixed;
    law.fixed_positive = j.get<bool>();
  } else if (j.is_string()) {
    law.kind = LabelLaw::Kind::kFixed;
    if (j == positive) law.fixed_positive = true;
    else if (j == negative) law.fixed_positive = false;
    else throw DataError("synth config: unknown label " + j.dump());
  } else if (j.is_object() && j.contains(positive)) {
    law.kind = LabelLaw::Kind::kRandom;
    law.positive_probability = j[positive].get<double>();
  } else {
    throw DataError("synth config: unknown label " + j.dump());
  }
  return law;
}

}  // namespace

SynthConfig parse_synth_config(std::string_view document) {
  SynthConfig cfg;
  try {
    const json doc = json::parse(document);
    cfg.merge_gap = doc.value("merge_gap", kDefaultMergeGap);
    cfg.words_per_second = doc.value("words_per_second", 2.5);
    cfg.train_fraction = doc.value("train_fraction", 0.5);
    for (const auto& pj : doc.at("profiles")) {
      Profile p;
      p.name = pj.value("name", std::string("profile"));
      p.weight = pj.value("weight", 1.0);
      p.target_duration = pj.value("target_duration", 120.0);
      p.initial = row_from_json(pj.at("initial"));
      for (int i = 0; i < kNumSegmentTypes; ++i) {
        const std::string key(to_string(type_from_index(i)));
        p.transitions[i] = row_from_json(pj.at("transitions").at(key));
        const auto& d = pj.at("durations").at(key);
        p.durations[i] = {d.at("mu").get<double>(), d.at("sigma").get<double>()};
      }
      if (pj.contains("labels")) {
        const auto& l = pj["labels"];
        if (l.contains("request")) p.request = label_from_json(l["request"], "member", "process");
        if (l.contains("complaint")) p.complaint = label_from_json(l["complaint"], "yes", "no");
      }
      cfg.profiles.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("synth config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

SynthConfig load_synth_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open synth config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_synth_config(ss.str());
}

std::string synth_config_to_json(const SynthConfig& cfg) {
  json doc;
  doc["merge_gap"] = cfg.merge_gap;
  doc["words_per_second"] = cfg.words_per_second;
  doc["train_fraction"] = cfg.train_fraction;
  doc["profiles"] = json::array();
  for (const auto& p : cfg.profiles) {
    json pj;
    pj["name"] = p.name;
    pj["weight"] = p.weight;
    pj["target_duration"] = p.target_duration;
    pj["initial"] = row_to_json(p.initial);
    for (int i = 0; i < kNumSegmentTypes; ++i) {
      const std::string key(to_string(type_from_index(i)));
      pj["transitions"][key] = row_to_json(p.transitions[i]);
      pj["durations"][key] = {{"mu", p.durations[i].mu}, {"sigma", p.durations[i].sigma}};
    }
    pj["labels"]["request"] = label_to_json(p.request, "member", "process", false);
    pj["labels"]["complaint"] = label_to_json(p.complaint, "yes", "no", true);
    doc["profiles"].push_back(std::move(pj));
  }
  return doc.dump(1);
}

SynthConfig two_profile_config(double pause_factor, double target_duration) {
  using S = SegmentType;
  Profile base;
  base.target_duration = target_duration;
  base.initial[type_index(S::S1)] = 0.3;
  base.initial[type_index(S::S2)] = 0.7;
  auto set = [&](S from, std::initializer_list<std::pair<S, double>> row) {
    for (auto [to, p] : row) base.transitions[type_index(from)][type_index(to)] = p;
  };
  set(S::S1, {{S::S3, 0.15}, {S::S6, 0.55}, {S::S7, 0.25}, {S::S2, 0.05}});
  set(S::S2, {{S::S4, 0.15}, {S::S5, 0.55}, {S::S8, 0.25}, {S::S1, 0.05}});
  set(S::S3, {{S::S1, 0.3}, {S::S2, 0.4}, {S::S6, 0.2}, {S::S7, 0.1}});
  set(S::S4, {{S::S1, 0.4}, {S::S2, 0.3}, {S::S5, 0.2}, {S::S8, 0.1}});
  set(S::S5, {{S::S1, 0.9}, {S::S3, 0.1}});
  set(S::S6, {{S::S2, 1.0}});
  set(S::S7, {{S::S1, 0.9}, {S::S3, 0.1}});
  set(S::S8, {{S::S2, 1.0}});
  const std::array<double, kNumSegmentTypes> medians = {3.0, 4.0, 0.6, 0.6, 0.5, 0.5, 0.6, 0.6};
  const std::array<double, kNumSegmentTypes> sigmas = {0.6, 0.6, 0.4, 0.4, 0.5, 0.5, 0.5, 0.5};
  for (int i = 0; i < kNumSegmentTypes; ++i) base.durations[i] = {std::log(medians[i]), sigmas[i]};
  base.request = {LabelLaw::Kind::kRandom, false, 0.5};

  Profile control = base;
  control.name = "control";
  control.weight = 0.5;
  control.complaint = {LabelLaw::Kind::kFixed, false, 0.0};

  Profile complaint = base;
  complaint.name = "complaint";
  complaint.weight = 0.5;
  complaint.complaint = {LabelLaw::Kind::kFixed, true, 0.0};
  for (S t : {S::S5, S::S7}) complaint.durations[type_index(t)].mu += std::log(pause_factor);

  SynthConfig cfg;
  cfg.profiles = {control, complaint};
  return cfg;
}

}  // namespace turnlens
