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

#include <cmath>
#include <span>

namespace turnlens {

/// Population moments of a sample. Degenerate samples (n < 2 or zero
/// variance) report sd, skewness and excess kurtosis as 0.
struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;  // excess: m4 / m2^2 - 3
};

template <typename T>
Moments population_moments(std::span<const T> xs) {
  Moments m;
  const std::size_t n = xs.size();
  if (n == 0) return m;
  double sum = 0.0;
  for (T x : xs) sum += static_cast<double>(x);
  m.mean = sum / static_cast<double>(n);
  if (n < 2) return m;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (T x : xs) {
    const double d = static_cast<double>(x) - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (!(m2 > 0.0)) return m;
  m.sd = std::sqrt(m2);
  m.skewness = m3 / (m2 * m.sd);
  m.kurtosis = m4 / (m2 * m2) - 3.0;
  return m;
}

}  // namespace turnlens
