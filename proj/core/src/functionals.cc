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

#include "turnlens/error.h"
#include "turnlens/features.h"
#include "turnlens/moments.h"

namespace turnlens {

std::vector<double> pool_functionals(const FrameMatrix& fm) {
  const std::size_t d = fm.dim;
  const std::size_t t = fm.num_frames();
  if (d == 0 || t == 0 || fm.frames.size() != t * d)
    throw InvalidArgument("pool_functionals: empty or ragged frame matrix for '" + fm.id + "'");

  std::vector<double> out(4 * d);
  std::vector<double> column(t);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < t; ++i) column[i] = fm.frames[i * d + j];
    const Moments m = population_moments(std::span<const double>(column));
    out[j] = m.mean;
    out[d + j] = m.sd;
    out[2 * d + j] = m.kurtosis;
    out[3 * d + j] = m.skewness;
  }
  return out;
}

std::vector<std::string> functional_names(std::size_t dim) {
  std::vector<std::string> names;
  names.reserve(4 * dim);
  for (const char* prefix : {"mean_", "sd_", "kurt_", "skew_"})
    for (std::size_t j = 0; j < dim; ++j) names.push_back(prefix + std::to_string(j));
  return names;
}

}  // namespace turnlens
