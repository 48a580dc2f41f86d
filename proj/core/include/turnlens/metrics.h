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
#include <vector>

namespace turnlens {

struct EvalResult {
  std::size_t classes = 0;
  std::vector<std::size_t> confusion;  // row = true class, column = predicted
  std::vector<double> recall;
  double uar = 0.0;

  std::size_t at(std::size_t truth, std::size_t pred) const { return confusion[truth * classes + pred]; }
};

/// Confusion matrix, per-class recall and unweighted average recall over
/// classes 0..num_classes-1. Throws InvalidArgument when a class has no
/// true sample or the inputs differ in length.
EvalResult evaluate(std::span<const int> y_true, std::span<const int> y_pred, std::size_t num_classes);

/// UAR with num_classes = 1 + largest label seen.
double uar(std::span<const int> y_true, std::span<const int> y_pred);

/// UAR recomputed from a confusion matrix.
double uar_from_confusion(std::span<const std::size_t> confusion, std::size_t classes);

}  // namespace turnlens
