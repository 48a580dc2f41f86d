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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace turnlens {

/// A named feature set: one row of 32-bit values per conversation id.
/// Rows keep insertion order.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::string set_name, std::vector<std::string> feature_names);

  const std::string& set_name() const { return set_name_; }
  void set_set_name(std::string name) { set_name_ = std::move(name); }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::string>& ids() const { return ids_; }

  std::size_t rows() const { return ids_.size(); }
  std::size_t dim() const { return feature_names_.size(); }

  /// Appends a row. Throws DataError on a duplicate id, a wrong length or a
  /// non-finite value.
  void add_row(std::string id, std::span<const float> values);
  void add_row(std::string id, std::span<const double> values);

  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim(), dim()};
  }
  std::span<const float> row(std::string_view id) const;
  bool contains(std::string_view id) const;
  std::size_t index_of_id(std::string_view id) const;
  std::size_t index_of_feature(std::string_view name) const;

  /// New matrix holding the listed ids, in that order.
  FeatureMatrix subset_rows(std::span<const std::string> ids) const;
  /// New matrix holding the listed features, in that order.
  FeatureMatrix subset_columns(std::span<const std::string> names) const;

  const std::vector<float>& data() const { return data_; }

  friend bool operator==(const FeatureMatrix& a, const FeatureMatrix& b) {
    return a.set_name_ == b.set_name_ && a.feature_names_ == b.feature_names_ &&
           a.ids_ == b.ids_ && a.data_ == b.data_;
  }

 private:
  std::string set_name_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> id_index_;
  std::vector<float> data_;
};

/// Frame-level features of one conversation: frames() is T x D row-major.
struct FrameMatrix {
  std::string id;
  std::uint32_t dim = 0;
  std::uint32_t frame_period_ms = 20;
  std::vector<float> frames;

  std::size_t num_frames() const { return dim == 0 ? 0 : frames.size() / dim; }
  friend bool operator==(const FrameMatrix&, const FrameMatrix&) = default;
};

/// Per-dimension functionals over frames, laid out as
/// [Mean | Sd | Kurtosis | Skewness], each block D wide. Population moments,
/// excess kurtosis; zero-variance dimensions give Sd = K = Sk = 0.
std::vector<double> pool_functionals(const FrameMatrix& fm);

/// Feature names for a pooled vector: mean_0..mean_{D-1}, sd_*, kurt_*, skew_*.
std::vector<std::string> functional_names(std::size_t dim);

template <typename T>
std::vector<T> truncate_head(std::span<const T> tokens, std::size_t n) {
  const std::size_t keep = std::min(n, tokens.size());
  return {tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(keep)};
}

template <typename T>
std::vector<T> truncate_tail(std::span<const T> tokens, std::size_t n) {
  const std::size_t keep = std::min(n, tokens.size());
  return {tokens.end() - static_cast<std::ptrdiff_t>(keep), tokens.end()};
}

/// Column-wise concatenation. Feature names become "<set>:<name>", the set
/// name is the "+"-joined list of inputs, rows follow the first set's order.
/// Throws DataError when the id sets differ.
FeatureMatrix concat_feature_sets(std::span<const FeatureMatrix> sets);

struct StandardizerParams {
  std::vector<double> mean;
  std::vector<double> scale;
};

/// z-score parameters from population mean and standard deviation; zero
/// variance columns get scale 1.
StandardizerParams fit_standardizer(const FeatureMatrix& train);
FeatureMatrix apply_standardizer(const StandardizerParams& params, const FeatureMatrix& m);

/// Standardized rows as doubles (row-major), the layout the learners use.
std::vector<double> standardized_rows(const StandardizerParams& params, const FeatureMatrix& m);

}  // namespace turnlens
