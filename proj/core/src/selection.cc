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
#include <numeric>

#include "json.hpp"
#include "turnlens/error.h"
#include "turnlens/parallel.h"
#include "turnlens/selection.h"

namespace turnlens {

ContingencyTable::ContingencyTable(std::size_t bins, std::size_t classes)
    : bins_(bins), classes_(classes), counts_(bins * classes, 0) {}

std::vector<std::size_t> ContingencyTable::class_totals() const {
  std::vector<std::size_t> totals(classes_, 0);
  for (std::size_t b = 0; b < bins_; ++b)
    for (std::size_t c = 0; c < classes_; ++c) totals[c] += at(b, c);
  return totals;
}

std::size_t ContingencyTable::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

double entropy(std::span<const std::size_t> counts) {
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  if (n == 0.0) throw InvalidArgument("entropy: all counts are zero");
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double information_gain_binned(const ContingencyTable& table) {
  const std::size_t n = table.total();
  if (n == 0) throw InvalidArgument("information_gain_binned: empty table");
  const auto totals = table.class_totals();
  double conditional = 0.0;
  for (std::size_t b = 0; b < table.bins(); ++b) {
    auto row = table.bin(b);
    const std::size_t nb = std::accumulate(row.begin(), row.end(), std::size_t{0});
    if (nb == 0) continue;
    conditional += static_cast<double>(nb) / static_cast<double>(n) * entropy(row);
  }
  return std::max(0.0, entropy(totals) - conditional);
}

namespace {

struct ValueGroup {
  double value;
  std::vector<std::size_t> counts;  // per class
  int pure_class;                    // -1 when mixed
};

std::size_t distinct_classes(std::span<const std::size_t> counts) {
  return static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }));
}

class MdlpSplitter {
 public:
  MdlpSplitter(std::vector<ValueGroup> groups, std::size_t classes)
      : groups_(std::move(groups)), classes_(classes) {}

  std::vector<double> run() {
    if (groups_.size() > 1) split(0, groups_.size());
    std::sort(cuts_.begin(), cuts_.end());
    return cuts_;
  }

 private:
  // Groups [lo, hi).
  void split(std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> total(classes_, 0);
    for (std::size_t g = lo; g < hi; ++g)
      for (std::size_t c = 0; c < classes_; ++c) total[c] += groups_[g].counts[c];
    const double n = static_cast<double>(std::accumulate(total.begin(), total.end(), std::size_t{0}));
    const double h = entropy(total);
    if (h == 0.0) return;

    std::vector<std::size_t> left(classes_, 0), right(classes_);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_at = hi;
    std::vector<std::size_t> best_left, best_right;
    for (std::size_t g = lo; g + 1 < hi; ++g) {
      for (std::size_t c = 0; c < classes_; ++c) left[c] += groups_[g].counts[c];
      const auto& a = groups_[g];
      const auto& b = groups_[g + 1];
      if (a.pure_class >= 0 && a.pure_class == b.pure_class) continue;
      for (std::size_t c = 0; c < classes_; ++c) right[c] = total[c] - left[c];
      const double nl = static_cast<double>(std::accumulate(left.begin(), left.end(), std::size_t{0}));
      const double e = (nl * entropy(left) + (n - nl) * entropy(right)) / n;
      if (e < best) {
        best = e;
        best_at = g;
        best_left = left;
        best_right = right;
      }
    }
    if (best_at == hi) return;

    const double gain = h - best;
    const double k = static_cast<double>(distinct_classes(total));
    const double k1 = static_cast<double>(distinct_classes(best_left));
    const double k2 = static_cast<double>(distinct_classes(best_right));
    const double delta =
        std::log2(std::pow(3.0, k) - 2.0) - (k * h - k1 * entropy(best_left) - k2 * entropy(best_right));
    const double threshold = (std::log2(n - 1.0) + delta) / n;
    if (!(gain > threshold)) return;

    cuts_.push_back(0.5 * (groups_[best_at].value + groups_[best_at + 1].value));
    split(lo, best_at + 1);
    split(best_at + 1, hi);
  }

  std::vector<ValueGroup> groups_;
  std::size_t classes_;
  std::vector<double> cuts_;
};

std::size_t num_classes_of(std::span<const int> labels) {
  int mx = -1;
  for (int l : labels) {
    if (l < 0) throw InvalidArgument("class labels must be non-negative indices");
    mx = std::max(mx, l);
  }
  return static_cast<std::size_t>(mx + 1);
}

}  // namespace

std::vector<double> discretize_mdlp(std::span<const double> values, std::span<const int> labels) {
  if (values.size() != labels.size())
    throw InvalidArgument("discretize_mdlp: values and labels differ in length");
  if (values.size() < 2) return {};
  const std::size_t classes = num_classes_of(labels);

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<ValueGroup> groups;
  for (std::size_t i : order) {
    if (groups.empty() || groups.back().value != values[i])
      groups.push_back({values[i], std::vector<std::size_t>(classes, 0), -1});
    ++groups.back().counts[static_cast<std::size_t>(labels[i])];
  }
  for (auto& g : groups)
    if (distinct_classes(g.counts) == 1)
      g.pure_class = static_cast<int>(std::find_if(g.counts.begin(), g.counts.end(), [](std::size_t c) { return c > 0; }) -
                                      g.counts.begin());

  return MdlpSplitter(std::move(groups), classes).run();
}

ContingencyTable tabulate(std::span<const double> values, std::span<const int> labels,
                          std::span<const double> cuts, std::size_t num_classes) {
  if (values.size() != labels.size()) throw InvalidArgument("tabulate: values and labels differ in length");
  ContingencyTable table(cuts.size() + 1, num_classes);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bin = static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), values[i]) - cuts.begin());
    ++table.at(bin, static_cast<std::size_t>(labels[i]));
  }
  return table;
}

RelevanceRanking rank_relevant(const FeatureMatrix& m, std::span<const int> labels, unsigned jobs) {
  if (labels.size() != m.rows())
    throw DataError("rank_relevant: " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(m.rows()) + " rows of '" + m.set_name() + "'");
  if (m.rows() == 0) return {};
  const std::size_t classes = num_classes_of(labels);

  std::vector<double> gains(m.dim(), 0.0);
  parallel_for(m.dim(), jobs, [&](std::size_t j) {
    std::vector<double> column(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) column[i] = m.row(i)[j];
    const auto cuts = discretize_mdlp(column, labels);
    if (cuts.empty()) return;
    gains[j] = information_gain_binned(tabulate(column, labels, cuts, classes));
  });

  RelevanceRanking ranking;
  for (std::size_t j = 0; j < m.dim(); ++j)
    if (gains[j] > 0.0) ranking.push_back({m.feature_names()[j], gains[j]});
  std::sort(ranking.begin(), ranking.end(), [](const RankedFeature& a, const RankedFeature& b) {
    if (a.gain_bits != b.gain_bits) return a.gain_bits > b.gain_bits;
    return a.feature < b.feature;
  });
  return ranking;
}

std::string ranking_to_json(const RelevanceRanking& ranking) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : ranking) arr.push_back({{"feature", r.feature}, {"gain_bits", r.gain_bits}});
  return arr.dump(1);
}

}  // namespace turnlens
