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
#include <unordered_set>

#include "turnlens/error.h"
#include "turnlens/features.h"

namespace turnlens {

FeatureMatrix::FeatureMatrix(std::string set_name, std::vector<std::string> feature_names)
    : set_name_(std::move(set_name)), feature_names_(std::move(feature_names)) {}

namespace {

template <typename T>
void check_row(const std::string& set, const std::string& id, std::span<const T> values, std::size_t dim) {
  if (values.size() != dim)
    throw DataError("feature set '" + set + "': row '" + id + "' has " + std::to_string(values.size()) +
                    " values, expected " + std::to_string(dim));
  for (T v : values)
    if (!std::isfinite(static_cast<double>(v)))
      throw DataError("feature set '" + set + "': row '" + id + "' holds a non-finite value");
}

}  // namespace

void FeatureMatrix::add_row(std::string id, std::span<const float> values) {
  check_row(set_name_, id, values, dim());
  if (!id_index_.emplace(id, ids_.size()).second)
    throw DataError("feature set '" + set_name_ + "': duplicate id '" + id + "'");
  ids_.push_back(std::move(id));
  data_.insert(data_.end(), values.begin(), values.end());
}

void FeatureMatrix::add_row(std::string id, std::span<const double> values) {
  std::vector<float> f(values.begin(), values.end());
  for (std::size_t i = 0; i < f.size(); ++i)
    if (std::isfinite(values[i]) && !std::isfinite(f[i]))
      throw DataError("feature set '" + set_name_ + "': row '" + id + "' overflows 32-bit range");
  add_row(std::move(id), std::span<const float>(f));
}

bool FeatureMatrix::contains(std::string_view id) const {
  return id_index_.find(std::string(id)) != id_index_.end();
}

std::size_t FeatureMatrix::index_of_id(std::string_view id) const {
  auto it = id_index_.find(std::string(id));
  if (it == id_index_.end())
    throw DataError("feature set '" + set_name_ + "': no row for id '" + std::string(id) + "'");
  return it->second;
}

std::span<const float> FeatureMatrix::row(std::string_view id) const { return row(index_of_id(id)); }

std::size_t FeatureMatrix::index_of_feature(std::string_view name) const {
  for (std::size_t j = 0; j < feature_names_.size(); ++j)
    if (feature_names_[j] == name) return j;
  throw DataError("feature set '" + set_name_ + "': unknown feature '" + std::string(name) + "'");
}

FeatureMatrix FeatureMatrix::subset_rows(std::span<const std::string> ids) const {
  FeatureMatrix out(set_name_, feature_names_);
  for (const auto& id : ids) out.add_row(id, row(id));
  return out;
}

FeatureMatrix FeatureMatrix::subset_columns(std::span<const std::string> names) const {
  std::vector<std::size_t> cols;
  cols.reserve(names.size());
  for (const auto& n : names) cols.push_back(index_of_feature(n));
  FeatureMatrix out(set_name_, std::vector<std::string>(names.begin(), names.end()));
  std::vector<float> buf(cols.size());
  for (std::size_t i = 0; i < rows(); ++i) {
    auto r = row(i);
    for (std::size_t j = 0; j < cols.size(); ++j) buf[j] = r[cols[j]];
    out.add_row(ids_[i], std::span<const float>(buf));
  }
  return out;
}

FeatureMatrix concat_feature_sets(std::span<const FeatureMatrix> sets) {
  if (sets.empty()) throw InvalidArgument("concat_feature_sets: no input sets");
  if (sets.size() == 1) return sets.front();

  std::string name;
  std::vector<std::string> names;
  for (const auto& s : sets) {
    if (!name.empty()) name += "+";
    name += s.set_name();
    for (const auto& f : s.feature_names()) names.push_back(s.set_name() + ":" + f);
  }

  const FeatureMatrix& first = sets.front();
  for (const auto& s : sets) {
    bool same = s.rows() == first.rows();
    for (std::size_t i = 0; same && i < first.rows(); ++i) same = s.contains(first.ids()[i]);
    if (!same)
      throw DataError("concat: id sets of '" + first.set_name() + "' and '" + s.set_name() + "' differ");
  }

  FeatureMatrix out(name, std::move(names));
  std::vector<float> buf;
  for (std::size_t i = 0; i < first.rows(); ++i) {
    buf.clear();
    const auto& id = first.ids()[i];
    for (const auto& s : sets) {
      auto r = s.row(id);
      buf.insert(buf.end(), r.begin(), r.end());
    }
    out.add_row(id, std::span<const float>(buf));
  }
  return out;
}

}  // namespace turnlens
