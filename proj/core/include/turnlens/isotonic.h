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

#include <span>
#include <vector>

namespace turnlens {

/// Step-function posterior estimate. breakpoints ascend; values are the
/// calibrated probabilities from each breakpoint up to the next.
struct IsotonicCalibrator {
  std::vector<double> breakpoints;
  std::vector<double> values;

  friend bool operator==(const IsotonicCalibrator&, const IsotonicCalibrator&) = default;
};

/// Weighted least-squares nondecreasing fit by pool-adjacent-violators.
/// Returns one fitted value per input, in input order.
std::vector<double> pava(std::span<const double> y, std::span<const double> weights = {});

/// Fits P(label = 1 | score). Tied scores are pooled first. labels are 0/1.
/// Throws InvalidArgument on empty or mismatched input.
IsotonicCalibrator fit_isotonic(std::span<const double> scores, std::span<const int> labels);

/// Value of the step at the last breakpoint <= score, clamped at both ends.
double calibrate(const IsotonicCalibrator& cal, double score);

}  // namespace turnlens
