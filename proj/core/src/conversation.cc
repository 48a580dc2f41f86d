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
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "turnlens/corpus.h"
#include "turnlens/error.h"

namespace turnlens {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& id, const std::string& field, const std::string& what) {
  throw DataError("conversation '" + id + "': " + field + ": " + what);
}

std::vector<Utterance> parse_channel(const json& doc, const std::string& id, const char* name) {
  std::vector<Utterance> out;
  const auto& channels = doc.at("channels");
  if (!channels.contains(name) || channels[name].is_null()) return out;
  const auto& arr = channels[name];
  const std::string field = std::string("channels.") + name;
  if (!arr.is_array()) fail(id, field, "malformed document: expected an array");
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const auto& u = arr[i];
    const std::string ufield = field + "[" + std::to_string(i) + "]";
    if (!u.is_object() || !u.contains("start") || !u.contains("end") || !u.contains("text"))
      fail(id, ufield, "malformed document: utterance needs start, end and text");
    if (!u["start"].is_number() || !u["end"].is_number() || !u["text"].is_string())
      fail(id, ufield, "malformed document: wrong field types");
    out.push_back({u["start"].get<double>(), u["end"].get<double>(), u["text"].get<std::string>()});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Utterance& a, const Utterance& b) { return a.start < b.start; });
  return out;
}

void validate_channel(const std::vector<Utterance>& utts, const std::string& id, const char* name) {
  const std::string field = std::string("channels.") + name;
  for (std::size_t i = 0; i < utts.size(); ++i) {
    const auto& u = utts[i];
    if (!std::isfinite(u.start) || !std::isfinite(u.end) || u.start < 0.0)
      fail(id, field, "start must be a finite value >= 0");
    if (!(u.end > u.start)) fail(id, field, "utterance end <= start");
    if (u.text.empty()) fail(id, field, "utterance text is empty");
    if (i > 0 && u.start < utts[i - 1].start) fail(id, field, "utterances not sorted by start");
    if (i > 0 && u.start < utts[i - 1].end) fail(id, field, "overlapping utterances within channel");
  }
}

}  // namespace

std::string_view to_string(Channel c) { return c == Channel::kCustomer ? "customer" : "agent"; }
std::string_view to_string(Split s) { return s == Split::kTrain ? "train" : "devel"; }
std::string_view to_string(RequestLabel r) { return r == RequestLabel::kProcess ? "process" : "member"; }
std::string_view to_string(Task t) { return t == Task::kRequest ? "request" : "complaint"; }
std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::kCustomer: return "customer";
    case Scope::kAgent: return "agent";
    case Scope::kWhole: return "whole";
  }
  return "whole";
}

Split parse_split(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "devel") return Split::kDevel;
  throw DataError("unknown split '" + std::string(s) + "'");
}

Task parse_task(std::string_view s) {
  if (s == "request") return Task::kRequest;
  if (s == "complaint") return Task::kComplaint;
  throw DataError("unknown task '" + std::string(s) + "'");
}

Scope parse_scope(std::string_view s) {
  if (s == "customer") return Scope::kCustomer;
  if (s == "agent") return Scope::kAgent;
  if (s == "whole") return Scope::kWhole;
  throw DataError("unknown scope '" + std::string(s) + "'");
}

void validate(const Conversation& conv) {
  if (conv.id.empty()) fail(conv.id, "id", "empty id");
  validate_channel(conv.customer, conv.id, "customer");
  validate_channel(conv.agent, conv.id, "agent");
  if (conv.customer.empty() && conv.agent.empty())
    fail(conv.id, "channels", "no utterance on either channel");
}

Conversation parse_conversation(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) throw DataError("malformed document: top level must be an object");

  Conversation conv;
  if (!doc.contains("id") || !doc["id"].is_string())
    throw DataError("malformed document: missing string field 'id'");
  conv.id = doc["id"].get<std::string>();
  const std::string& id = conv.id;

  if (!doc.contains("channels") || !doc["channels"].is_object())
    fail(id, "channels", "malformed document: missing object");

  if (doc.contains("labels") && !doc["labels"].is_null()) {
    const auto& labels = doc["labels"];
    if (!labels.is_object()) fail(id, "labels", "malformed document: expected an object");
    if (labels.contains("request") && !labels["request"].is_null()) {
      const auto& r = labels["request"];
      if (!r.is_string()) fail(id, "labels.request", "unknown label");
      const auto s = r.get<std::string>();
      if (s == "process") conv.request = RequestLabel::kProcess;
      else if (s == "member") conv.request = RequestLabel::kMember;
      else fail(id, "labels.request", "unknown label '" + s + "'");
    }
    if (labels.contains("complaint") && !labels["complaint"].is_null()) {
      const auto& c = labels["complaint"];
      if (c.is_boolean()) {
        conv.complaint = c.get<bool>();
      } else if (c.is_string() && (c == "yes" || c == "no")) {
        conv.complaint = (c == "yes");
      } else {
        fail(id, "labels.complaint", "unknown label " + c.dump());
      }
    }
  }

  if (doc.contains("split")) {
    if (!doc["split"].is_string()) fail(id, "split", "malformed document: expected a string");
    const auto s = doc["split"].get<std::string>();
    if (s == "train") conv.split = Split::kTrain;
    else if (s == "devel") conv.split = Split::kDevel;
    else fail(id, "split", "unknown split '" + s + "'");
  } else {
    fail(id, "split", "malformed document: missing field");
  }

  conv.customer = parse_channel(doc, id, "customer");
  conv.agent = parse_channel(doc, id, "agent");
  validate(conv);
  return conv;
}

Conversation load_conversation(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open conversation file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_conversation(buf.str());
  } catch (const DataError& e) {
    throw DataError("'" + path.string() + "': " + e.what());
  }
}

std::string serialize_conversation(const Conversation& conv) {
  auto channel = [](const std::vector<Utterance>& utts) {
    json arr = json::array();
    for (const auto& u : utts) arr.push_back({{"start", u.start}, {"end", u.end}, {"text", u.text}});
    return arr;
  };
  json doc;
  doc["id"] = conv.id;
  doc["labels"]["request"] = conv.request ? json(std::string(to_string(*conv.request))) : json(nullptr);
  doc["labels"]["complaint"] = conv.complaint ? json(*conv.complaint) : json(nullptr);
  doc["split"] = std::string(to_string(conv.split));
  doc["channels"]["customer"] = channel(conv.customer);
  doc["channels"]["agent"] = channel(conv.agent);
  return doc.dump(1);
}

void save_conversation(const std::filesystem::path& path, const Conversation& conv) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << serialize_conversation(conv) << '\n';
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

namespace {

void append_tokens(std::string_view text, std::vector<std::string>& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
}

}  // namespace

std::vector<std::string> channel_tokens(const Conversation& conv, Scope scope) {
  std::vector<std::string> tokens;
  if (scope == Scope::kCustomer || scope == Scope::kAgent) {
    for (const auto& u : conv.channel(scope == Scope::kCustomer ? Channel::kCustomer : Channel::kAgent))
      append_tokens(u.text, tokens);
    return tokens;
  }
  // Merge the two sorted channels; customer wins ties.
  auto c = conv.customer.begin();
  auto a = conv.agent.begin();
  while (c != conv.customer.end() || a != conv.agent.end()) {
    if (a == conv.agent.end() || (c != conv.customer.end() && c->start <= a->start)) {
      append_tokens(c->text, tokens);
      ++c;
    } else {
      append_tokens(a->text, tokens);
      ++a;
    }
  }
  return tokens;
}

std::optional<int> class_index(const Conversation& conv, Task task) {
  if (task == Task::kRequest) {
    if (!conv.request) return std::nullopt;
    return *conv.request == RequestLabel::kMember ? 1 : 0;
  }
  if (!conv.complaint) return std::nullopt;
  return *conv.complaint ? 1 : 0;
}

std::array<std::string_view, 2> class_names(Task task) {
  if (task == Task::kRequest) return {"process", "member"};
  return {"no", "yes"};
}

}  // namespace turnlens
