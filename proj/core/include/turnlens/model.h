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
#include <filesystem>
#include <string>
#include <vector>

#include "turnlens/features.h"
#include "turnlens/isotonic.h"
#include "turnlens/svm.h"

namespace turnlens {

/// Everything needed to score a feature set: standardizer, linear SVM and
/// the isotonic calibrator mapping scores to P(positive class).
struct TrainedModel {
  std::string set_name;
  std::vector<std::string> feature_names;
  std::string positive_label;
  std::string negative_label;
  LinearModel linear;
  StandardizerParams standardizer;
  IsotonicCalibrator calibrator;
};

std::string model_to_json(const TrainedModel& model);
TrainedModel model_from_json(std::string_view document);
void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

/// Isotonic calibrator fitted on pooled out-of-fold decision scores from
/// k-fold cross-validation on the training data. Folds are stratified by
/// class; a fold whose training part lacks a class falls back to scores
/// from the full-data model.
IsotonicCalibrator calibrate_out_of_fold(const DenseMatrix& x, std::span<const int> y, const SvmOptions& options,
                                         std::size_t folds = 5);

struct Prediction {
  std::vector<double> scores;
  std::vector<int> classes;  // 1 = positive label
  std::vector<double> probabilities;
};

/// Standardizes the columns named by the model (in model order) and scores them.
Prediction predict(const TrainedModel& model, const FeatureMatrix& m);

}  // namespace turnlens
