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
#include "turnlens/metrics.h"

namespace turnlens {

EvalResult evaluate(std::span<const int> y_true, std::span<const int> y_pred, std::size_t num_classes) {
  if (y_true.size() != y_pred.size()) throw InvalidArgument("evaluate: label vectors differ in length");
  EvalResult r;
  r.classes = num_classes;
  r.confusion.assign(num_classes * num_classes, 0);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const auto t = static_cast<std::size_t>(y_true[i]);
    const auto p = static_cast<std::size_t>(y_pred[i]);
    if (y_true[i] < 0 || y_pred[i] < 0 || t >= num_classes || p >= num_classes)
      throw InvalidArgument("evaluate: label outside [0, " + std::to_string(num_classes) + ")");
    ++r.confusion[t * num_classes + p];
  }
  r.uar = uar_from_confusion(r.confusion, num_classes);
  r.recall.resize(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    const auto row = std::span<const std::size_t>(r.confusion).subspan(c * num_classes, num_classes);
    const auto size = std::accumulate(row.begin(), row.end(), std::size_t{0});
    r.recall[c] = static_cast<double>(row[c]) / static_cast<double>(size);
  }
  return r;
}

double uar_from_confusion(std::span<const std::size_t> confusion, std::size_t classes) {
  if (classes == 0 || confusion.size() != classes * classes)
    throw InvalidArgument("uar: confusion matrix shape mismatch");
  double sum = 0.0;
  for (std::size_t c = 0; c < classes; ++c) {
    const auto row = confusion.subspan(c * classes, classes);
    const auto size = std::accumulate(row.begin(), row.end(), std::size_t{0});
    if (size == 0) throw InvalidArgument("uar: class " + std::to_string(c) + " has no true sample");
    sum += static_cast<double>(row[c]) / static_cast<double>(size);
  }
  return sum / static_cast<double>(classes);
}

double uar(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.empty()) throw InvalidArgument("uar: empty input");
  int mx = 0;
  for (int v : y_true) mx = std::max(mx, v);
  for (int v : y_pred) mx = std::max(mx, v);
  return evaluate(y_true, y_pred, static_cast<std::size_t>(mx) + 1).uar;
}

}  // namespace turnlens
