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
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "turnlens/corpus.h"
#include "turnlens/features.h"
#include "turnlens/metrics.h"
#include "turnlens/model.h"
#include "turnlens/selection.h"
#include "turnlens/svm.h"
#include "turnlens/turntaking.h"

namespace turnlens {

/// Feature-set expressions understood by run_experiment:
///   "TT"     the 64 turn-taking features computed from the manifest
///   "TTc"    the fixed six-feature complaint subset of TT
///   "TTsel"  TT columns with positive information gain on Train (all of
///            TT when none qualifies)
///   "<name>" an FSET file registered under fset_files
///   "A+B"    column concatenation of any of the above
struct ExperimentConfig {
  std::filesystem::path manifest;
  Task task = Task::kComplaint;
  std::vector<std::string> feature_sets;
  std::map<std::string, std::filesystem::path> fset_files;
  double merge_gap = kDefaultMergeGap;
  std::vector<double> c_grid = default_c_grid();
  bool class_weights = false;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  std::size_t bootstrap = 0;  // devel resamples for a 95% interval; 0 = off
  std::size_t calibration_folds = 5;
  unsigned jobs = 0;
};

/// Parses a JSON config; relative paths resolve against base_dir.
ExperimentConfig parse_experiment_config(std::string_view document, const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct FeatureSetResult {
  std::string name;
  std::size_t dim = 0;
  std::vector<std::string> selected;  // TTsel only
  double best_C = 0.0;
  double devel_uar = 0.0;
  std::size_t train_count = 0;
  std::size_t devel_count = 0;
  EvalResult devel_eval;
  std::vector<GridPoint> grid;
  std::optional<std::pair<double, double>> uar_ci95;
  std::string model_file;
};

struct ExperimentReport {
  std::string version;
  std::string config_hash;
  std::string config_echo;  // canonical JSON of the config
  std::uint64_t seed = 0;
  Task task = Task::kComplaint;
  std::vector<FeatureSetResult> results;
};

/// Turn-taking feature matrix (64 columns) for the given conversations.
FeatureMatrix extract_tt(std::span<const Conversation> conversations, double merge_gap, unsigned jobs = 1);

/// Ranks the TT features of the labeled Train conversations.
RelevanceRanking rank_tt(const Manifest& manifest, Task task, double merge_gap, unsigned jobs = 1);

/// Names of TT features with positive information gain on Train, in
/// relevance order. May be empty.
std::vector<std::string> derive_ttc(const Manifest& manifest, Task task, double merge_gap = kDefaultMergeGap,
                                    unsigned jobs = 1);

/// True when the set expression names TT, TTc or TTsel (alone or inside an "A+B" concatenation).
bool spec_needs_tt(const std::string& spec);

/// Materialises a feature-set expression over all conversations. `tt` must hold the
/// TT matrix when spec_needs_tt(spec); TTsel is ranked on Train only.
FeatureMatrix build_feature_set(const std::string& spec, std::span<const Conversation> convs, const FeatureMatrix& tt,
                                const std::map<std::string, std::filesystem::path>& fset_files, Task task,
                                std::vector<std::string>* selected = nullptr);

struct TrainSettings {
  std::vector<double> c_grid = default_c_grid();
  bool class_weights = false;
  std::uint64_t seed = 0;
  std::size_t calibration_folds = 5;
  std::size_t bootstrap = 0;
  std::uint64_t bootstrap_seed = 0;
};

/// Standardizes on Train, grid-searches C on Devel and, when `model` is set,
/// fits the out-of-fold calibrator and fills in the deployable model.
FeatureSetResult fit_feature_set(const FeatureMatrix& features, std::span<const Conversation> convs, Task task,
                                 const TrainSettings& settings, TrainedModel* model = nullptr);

/// Runs every feature set and writes report.json, report.txt and one model
/// file per feature set into config.output_dir.
ExperimentReport run_experiment(const ExperimentConfig& config);

std::string report_to_json(const ExperimentReport& report);
std::string report_to_text(const ExperimentReport& report);

}  // namespace turnlens
