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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "turnlens/features.h"

namespace turnlens {

/// bins x classes count table.
class ContingencyTable {
 public:
  ContingencyTable(std::size_t bins, std::size_t classes);

  std::size_t bins() const { return bins_; }
  std::size_t classes() const { return classes_; }
  std::size_t& at(std::size_t bin, std::size_t cls) { return counts_[bin * classes_ + cls]; }
  std::size_t at(std::size_t bin, std::size_t cls) const { return counts_[bin * classes_ + cls]; }
  std::span<const std::size_t> bin(std::size_t b) const { return {counts_.data() + b * classes_, classes_}; }
  std::vector<std::size_t> class_totals() const;
  std::size_t total() const;

 private:
  std::size_t bins_;
  std::size_t classes_;
  std::vector<std::size_t> counts_;
};

/// Shannon entropy in bits of a class-count vector (0 log 0 = 0).
double entropy(std::span<const std::size_t> counts);

/// H(class) - H(class | bin). Throws InvalidArgument on an empty table.
double information_gain_binned(const ContingencyTable& table);

/// Fayyad-Irani recursive minimum-description-length discretization.
/// Candidate cuts are midpoints between adjacent distinct values at class
/// boundaries. Returns ascending cut points; labels are class indices >= 0.
std::vector<double> discretize_mdlp(std::span<const double> values, std::span<const int> labels);

/// Counts samples per (bin, class) where bin b holds values in
/// (cuts[b-1], cuts[b]].
ContingencyTable tabulate(std::span<const double> values, std::span<const int> labels,
                          std::span<const double> cuts, std::size_t num_classes);

struct RankedFeature {
  std::string feature;
  double gain_bits = 0.0;

  friend bool operator==(const RankedFeature&, const RankedFeature&) = default;
};

using RelevanceRanking = std::vector<RankedFeature>;

/// Features with positive information gain after MDLP discretization,
/// ordered by descending gain then by name. labels[i] belongs to row i.
RelevanceRanking rank_relevant(const FeatureMatrix& m, std::span<const int> labels, unsigned jobs = 1);

std::string ranking_to_json(const RelevanceRanking& ranking);

}  // namespace turnlens
