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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace turnlens {

enum class Channel { kCustomer, kAgent };
enum class Split { kTrain, kDevel };
enum class RequestLabel { kProcess, kMember };
enum class Task { kRequest, kComplaint };

/// Token scope used when flattening a conversation into text.
enum class Scope { kCustomer, kAgent, kWhole };

std::string_view to_string(Channel c);
std::string_view to_string(Split s);
std::string_view to_string(RequestLabel r);
std::string_view to_string(Task t);
std::string_view to_string(Scope s);

Split parse_split(std::string_view s);
Task parse_task(std::string_view s);
Scope parse_scope(std::string_view s);

/// One transcribed utterance on a single channel. Times are in seconds.
struct Utterance {
  double start = 0.0;
  double end = 0.0;
  std::string text;

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct Conversation {
  std::string id;
  std::vector<Utterance> customer;
  std::vector<Utterance> agent;
  std::optional<RequestLabel> request;
  std::optional<bool> complaint;
  Split split = Split::kTrain;

  const std::vector<Utterance>& channel(Channel c) const {
    return c == Channel::kCustomer ? customer : agent;
  }

  friend bool operator==(const Conversation&, const Conversation&) = default;
};

/// Parses and validates a conversation document. Utterances are sorted by
/// start time; overlaps within a channel, end <= start, empty text and
/// unknown label strings raise DataError naming the id and the field.
Conversation parse_conversation(std::string_view document);
Conversation load_conversation(const std::filesystem::path& path);

/// Checks the Conversation invariants on an in-memory value.
void validate(const Conversation& conv);

std::string serialize_conversation(const Conversation& conv);
void save_conversation(const std::filesystem::path& path, const Conversation& conv);

/// Whitespace-split tokens in temporal order. For Scope::kWhole the two
/// channels are interleaved by utterance start, customer first on ties.
std::vector<std::string> channel_tokens(const Conversation& conv, Scope scope);

/// Binary class index for a task: request process=0/member=1,
/// complaint no=0/yes=1. Empty when the conversation is unlabeled.
std::optional<int> class_index(const Conversation& conv, Task task);

/// Display names of the two classes of a task, indexed by class_index.
std::array<std::string_view, 2> class_names(Task task);

struct ManifestEntry {
  std::string id;
  std::filesystem::path path;  // resolved against the manifest directory
  Split split = Split::kTrain;
};

struct SplitCounts {
  std::size_t entries = 0;
  std::size_t process = 0;
  std::size_t member = 0;
  std::size_t request_unlabeled = 0;
  std::size_t complaint_yes = 0;
  std::size_t complaint_no = 0;
  std::size_t complaint_unlabeled = 0;

  friend bool operator==(const SplitCounts&, const SplitCounts&) = default;
};

class Manifest {
 public:
  Manifest() = default;
  explicit Manifest(std::vector<ManifestEntry> entries);

  const std::vector<ManifestEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  /// Entry indices belonging to a split, in manifest order.
  std::vector<std::size_t> indices(Split split) const;

  /// Parses the conversation file of entry i. The parsed id must match.
  Conversation load(std::size_t i) const;

  const SplitCounts& counts(Split split) const {
    return split == Split::kTrain ? train_counts_ : devel_counts_;
  }

  /// Fills the per-split label counts by parsing every conversation file.
  void compute_counts();

 private:
  std::vector<ManifestEntry> entries_;
  SplitCounts train_counts_;
  SplitCounts devel_counts_;
};

/// Reads a manifest (JSON array of {"id","path","split"}). Paths are
/// resolved relative to the manifest's directory; missing files and
/// duplicate ids raise DataError. Label counts are computed eagerly by
/// parsing each file; conversations themselves are loaded on demand.
Manifest load_manifest(const std::filesystem::path& path);

/// Writes entries with paths relative to the manifest directory when possible.
void save_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

/// Loads every conversation of the manifest, optionally in parallel.
std::vector<Conversation> load_all(const Manifest& manifest, unsigned jobs = 0);

}  // namespace turnlens
