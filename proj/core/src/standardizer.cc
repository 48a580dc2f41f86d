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

#include "turnlens/error.h"
#include "turnlens/features.h"

namespace turnlens {

StandardizerParams fit_standardizer(const FeatureMatrix& train) {
  if (train.rows() == 0) throw InvalidArgument("fit_standardizer: empty training matrix");
  const std::size_t d = train.dim();
  const double n = static_cast<double>(train.rows());
  StandardizerParams p{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
  for (std::size_t i = 0; i < train.rows(); ++i) {
    auto r = train.row(i);
    for (std::size_t j = 0; j < d; ++j) p.mean[j] += r[j];
  }
  for (auto& m : p.mean) m /= n;
  std::vector<double> var(d, 0.0);
  for (std::size_t i = 0; i < train.rows(); ++i) {
    auto r = train.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double x = r[j] - p.mean[j];
      var[j] += x * x;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / n);
    p.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  return p;
}

std::vector<double> standardized_rows(const StandardizerParams& params, const FeatureMatrix& m) {
  const std::size_t d = m.dim();
  if (params.mean.size() != d || params.scale.size() != d)
    throw DataError("standardizer width " + std::to_string(params.mean.size()) +
                    " does not match feature set '" + m.set_name() + "' width " + std::to_string(d));
  std::vector<double> out(m.rows() * d);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto r = m.row(i);
    for (std::size_t j = 0; j < d; ++j) out[i * d + j] = (r[j] - params.mean[j]) / params.scale[j];
  }
  return out;
}

FeatureMatrix apply_standardizer(const StandardizerParams& params, const FeatureMatrix& m) {
  const auto z = standardized_rows(params, m);
  FeatureMatrix out(m.set_name(), m.feature_names());
  const std::size_t d = m.dim();
  for (std::size_t i = 0; i < m.rows(); ++i)
    out.add_row(m.ids()[i], std::span<const double>(z.data() + i * d, d));
  return out;
}

}  // namespace turnlens
