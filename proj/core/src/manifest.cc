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

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "turnlens/corpus.h"
#include "turnlens/error.h"
#include "turnlens/parallel.h"

namespace turnlens {

using nlohmann::json;
namespace fs = std::filesystem;

Manifest::Manifest(std::vector<ManifestEntry> entries) : entries_(std::move(entries)) {
  std::unordered_set<std::string> seen;
  for (const auto& e : entries_) {
    if (!seen.insert(e.id).second) throw DataError("manifest: duplicate id '" + e.id + "'");
    if (!fs::exists(e.path))
      throw DataError("manifest: missing file '" + e.path.string() + "' for id '" + e.id + "'");
  }
}

std::vector<std::size_t> Manifest::indices(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].split == split) out.push_back(i);
  return out;
}

Conversation Manifest::load(std::size_t i) const {
  const auto& e = entries_.at(i);
  Conversation conv = load_conversation(e.path);
  if (conv.id != e.id)
    throw DataError("manifest: id '" + e.id + "' but file '" + e.path.string() + "' holds '" +
                    conv.id + "'");
  // The manifest is authoritative for split assignment.
  conv.split = e.split;
  return conv;
}

void Manifest::compute_counts() {
  train_counts_ = {};
  devel_counts_ = {};
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const Conversation conv = load(i);
    SplitCounts& c = entries_[i].split == Split::kTrain ? train_counts_ : devel_counts_;
    ++c.entries;
    if (!conv.request) ++c.request_unlabeled;
    else if (*conv.request == RequestLabel::kProcess) ++c.process;
    else ++c.member;
    if (!conv.complaint) ++c.complaint_unlabeled;
    else if (*conv.complaint) ++c.complaint_yes;
    else ++c.complaint_no;
  }
}

Manifest load_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open manifest '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw DataError("manifest '" + path.string() + "': malformed document: " + e.what());
  }
  if (!doc.is_array()) throw DataError("manifest '" + path.string() + "': expected a JSON array");

  const fs::path base = path.parent_path();
  std::vector<ManifestEntry> entries;
  entries.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& e = doc[i];
    if (!e.is_object() || !e.contains("id") || !e.contains("path") || !e.contains("split") ||
        !e["id"].is_string() || !e["path"].is_string() || !e["split"].is_string())
      throw DataError("manifest entry " + std::to_string(i) + ": needs string id, path and split");
    fs::path p = e["path"].get<std::string>();
    if (p.is_relative()) p = base / p;
    entries.push_back({e["id"].get<std::string>(), p, parse_split(e["split"].get<std::string>())});
  }
  Manifest m(std::move(entries));
  m.compute_counts();
  return m;
}

void save_manifest(const fs::path& path, const std::vector<ManifestEntry>& entries) {
  const fs::path base = path.parent_path();
  json arr = json::array();
  for (const auto& e : entries) {
    fs::path p = e.path;
    if (!base.empty() && p.is_absolute() == fs::path(base).is_absolute()) {
      auto rel = p.lexically_relative(base);
      if (!rel.empty() && *rel.begin() != "..") p = rel;
    }
    arr.push_back({{"id", e.id}, {"path", p.generic_string()}, {"split", std::string(to_string(e.split))}});
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write manifest '" + path.string() + "'");
  out << arr.dump(1) << '\n';
}

std::vector<Conversation> load_all(const Manifest& manifest, unsigned jobs) {
  std::vector<Conversation> out(manifest.size());
  parallel_for(manifest.size(), jobs, [&](std::size_t i) { out[i] = manifest.load(i); });
  return out;
}

}  // namespace turnlens
