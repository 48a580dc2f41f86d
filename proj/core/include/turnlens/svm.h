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

#include <cstdint>
#include <span>
#include <vector>

#include "turnlens/dense.h"
#include "turnlens/metrics.h"

namespace turnlens {

struct SvmOptions {
  double C = 1.0;
  /// Scale each sample's loss by n / (2 n_class).
  bool class_weights = false;
  std::uint64_t seed = 0;
  /// Stop once the largest projected-gradient violation drops below this.
  double tolerance = 1e-4;
  std::size_t max_epochs = 10000;
};

/// Linear decision function score = w.x + b; positive scores predict +1.
struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  double C = 1.0;
};

struct TrainingTrace {
  std::vector<double> dual_objective;  // value after every epoch
  std::size_t epochs = 0;
  double max_violation = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  bool converged = false;
};

/// L1-loss (hinge) linear SVM by dual coordinate descent with random
/// coordinate order and shrinking. The bias is learned as the weight of a
/// constant feature, so the objective is
///   1/2 (|w|^2 + b^2) + C sum_i cw(y_i) max(0, 1 - y_i (w.x_i + b)).
/// y holds +1/-1. Throws InvalidArgument on single-class input, C <= 0 or
/// non-finite features.
LinearModel train_svm(const DenseMatrix& x, std::span<const int> y, const SvmOptions& options,
                      TrainingTrace* trace = nullptr);

std::vector<double> decision_scores(const LinearModel& model, const DenseMatrix& x);

/// Sign of the score as +1/-1 (zero maps to +1).
std::vector<int> predict_signs(const LinearModel& model, const DenseMatrix& x);

/// Primal objective of a model on a data set, same weighting as training.
double primal_objective(const LinearModel& model, const DenseMatrix& x, std::span<const int> y,
                        const SvmOptions& options);

/// 2^-15, 2^-13, ..., 2^5.
std::vector<double> default_c_grid();

struct GridPoint {
  double C = 0.0;
  double devel_uar = 0.0;
};

struct GridSearchResult {
  double best_C = 0.0;
  LinearModel model;
  double devel_uar = 0.0;
  EvalResult devel_eval;
  std::vector<GridPoint> points;  // in grid order
};

/// Trains one model per C on the training set and keeps the one with the
/// highest devel UAR; ties go to the smallest C.
GridSearchResult grid_search_C(const DenseMatrix& x_train, std::span<const int> y_train,
                               const DenseMatrix& x_devel, std::span<const int> y_devel,
                               std::span<const double> grid, const SvmOptions& base, unsigned jobs = 1);

/// +1/-1 to class index (1/0) and back.
inline int sign_to_class(int y) { return y > 0 ? 1 : 0; }
inline int class_to_sign(int c) { return c == 1 ? 1 : -1; }

}  // namespace turnlens
