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
#include <numeric>

#include "turnlens/error.h"
#include "turnlens/isotonic.h"

namespace turnlens {

std::vector<double> pava(std::span<const double> y, std::span<const double> weights) {
  if (!weights.empty() && weights.size() != y.size())
    throw InvalidArgument("pava: weights and values differ in length");
  struct Block {
    double sum;     // weighted sum
    double weight;  // total weight
    std::size_t count;
  };
  std::vector<Block> blocks;
  blocks.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    blocks.push_back({y[i] * w, w, 1});
    while (blocks.size() > 1) {
      const Block& last = blocks.back();
      const Block& prev = blocks[blocks.size() - 2];
      // prev mean > last mean, cross-multiplied to avoid division
      if (prev.sum * last.weight <= last.sum * prev.weight) break;
      Block merged{prev.sum + last.sum, prev.weight + last.weight, prev.count + last.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> fitted;
  fitted.reserve(y.size());
  for (const auto& b : blocks) fitted.insert(fitted.end(), b.count, b.sum / b.weight);
  return fitted;
}

IsotonicCalibrator fit_isotonic(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw InvalidArgument("fit_isotonic: scores and labels differ in length");
  if (scores.empty()) throw InvalidArgument("fit_isotonic: no samples");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Pool tied scores into one weighted observation.
  std::vector<double> xs, ys, ws;
  for (std::size_t i : order) {
    if (labels[i] != 0 && labels[i] != 1) throw InvalidArgument("fit_isotonic: labels must be 0 or 1");
    if (xs.empty() || xs.back() != scores[i]) {
      xs.push_back(scores[i]);
      ys.push_back(0.0);
      ws.push_back(0.0);
    }
    ys.back() += labels[i];
    ws.back() += 1.0;
  }
  for (std::size_t k = 0; k < ys.size(); ++k) ys[k] /= ws[k];

  const auto fitted = pava(ys, ws);
  IsotonicCalibrator cal;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (!cal.values.empty() && cal.values.back() == fitted[k]) continue;
    cal.breakpoints.push_back(xs[k]);
    cal.values.push_back(fitted[k]);
  }
  return cal;
}

double calibrate(const IsotonicCalibrator& cal, double score) {
  if (cal.breakpoints.empty()) throw InvalidArgument("calibrate: calibrator is not fitted");
  auto it = std::upper_bound(cal.breakpoints.begin(), cal.breakpoints.end(), score);
  if (it == cal.breakpoints.begin()) return cal.values.front();
  return cal.values[static_cast<std::size_t>(it - cal.breakpoints.begin()) - 1];
}

}  // namespace turnlens
