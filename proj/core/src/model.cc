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
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "turnlens/error.h"
#include "turnlens/model.h"

namespace turnlens {

using nlohmann::json;

std::string model_to_json(const TrainedModel& m) {
  json doc;
  doc["weights"] = m.linear.weights;
  doc["bias"] = m.linear.bias;
  doc["C"] = m.linear.C;
  doc["standardizer"] = {{"mean", m.standardizer.mean}, {"scale", m.standardizer.scale}};
  doc["calibrator"] = {{"breakpoints", m.calibrator.breakpoints}, {"values", m.calibrator.values}};
  doc["positive_label"] = m.positive_label;
  doc["negative_label"] = m.negative_label;
  doc["set_name"] = m.set_name;
  doc["feature_names"] = m.feature_names;
  return doc.dump(1);
}

TrainedModel model_from_json(std::string_view document) {
  TrainedModel m;
  try {
    const json doc = json::parse(document);
    m.linear.weights = doc.at("weights").get<std::vector<double>>();
    m.linear.bias = doc.at("bias").get<double>();
    m.linear.C = doc.at("C").get<double>();
    m.standardizer.mean = doc.at("standardizer").at("mean").get<std::vector<double>>();
    m.standardizer.scale = doc.at("standardizer").at("scale").get<std::vector<double>>();
    m.calibrator.breakpoints = doc.at("calibrator").at("breakpoints").get<std::vector<double>>();
    m.calibrator.values = doc.at("calibrator").at("values").get<std::vector<double>>();
    m.positive_label = doc.at("positive_label").get<std::string>();
    m.negative_label = doc.value("negative_label", std::string());
    m.set_name = doc.value("set_name", std::string());
    m.feature_names = doc.value("feature_names", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw DataError(std::string("model document: ") + e.what());
  }
  const std::size_t d = m.linear.weights.size();
  if (m.standardizer.mean.size() != d || m.standardizer.scale.size() != d)
    throw DataError("model document: standardizer width does not match weights");
  if (!m.feature_names.empty() && m.feature_names.size() != d)
    throw DataError("model document: feature_names width does not match weights");
  if (m.calibrator.breakpoints.size() != m.calibrator.values.size())
    throw DataError("model document: calibrator breakpoints and values differ in length");
  if (!std::is_sorted(m.calibrator.values.begin(), m.calibrator.values.end()))
    throw DataError("model document: calibrator values must be nondecreasing");
  return m;
}

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write model '" + path.string() + "'");
  out << model_to_json(model) << '\n';
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

namespace {

DenseMatrix take_rows(const DenseMatrix& x, std::span<const std::size_t> rows) {
  DenseMatrix out(rows.size(), x.cols);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    auto src = x.row(rows[k]);
    std::copy(src.begin(), src.end(), out.row(k).begin());
  }
  return out;
}

}  // namespace

IsotonicCalibrator calibrate_out_of_fold(const DenseMatrix& x, std::span<const int> y, const SvmOptions& options,
                                         std::size_t folds) {
  const std::size_t n = x.rows;
  if (folds < 2) throw InvalidArgument("calibrate_out_of_fold: need at least two folds");

  // Stratified assignment: shuffle each class, then deal round-robin.
  std::vector<std::size_t> fold_of(n);
  std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  std::size_t dealt = 0;
  for (int cls : {-1, 1}) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (y[i] == cls) members.push_back(i);
    for (std::size_t k = 0; k + 1 < members.size(); ++k)
      std::swap(members[k], members[k + static_cast<std::size_t>(rng() % (members.size() - k))]);
    for (std::size_t i : members) fold_of[i] = dealt++ % folds;
  }

  std::vector<double> scores(n, 0.0);
  std::vector<bool> have(n, false);
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<std::size_t> train_rows, held_rows;
    std::vector<int> train_y;
    for (std::size_t i = 0; i < n; ++i) {
      if (fold_of[i] == f) {
        held_rows.push_back(i);
      } else {
        train_rows.push_back(i);
        train_y.push_back(y[i]);
      }
    }
    if (held_rows.empty()) continue;
    const bool both = std::find(train_y.begin(), train_y.end(), 1) != train_y.end() &&
                      std::find(train_y.begin(), train_y.end(), -1) != train_y.end();
    if (!both) continue;
    const auto model = train_svm(take_rows(x, train_rows), train_y, options);
    const auto s = decision_scores(model, take_rows(x, held_rows));
    for (std::size_t k = 0; k < held_rows.size(); ++k) {
      scores[held_rows[k]] = s[k];
      have[held_rows[k]] = true;
    }
  }
  if (std::find(have.begin(), have.end(), false) != have.end()) {
    const auto full = decision_scores(train_svm(x, y, options), x);
    for (std::size_t i = 0; i < n; ++i)
      if (!have[i]) scores[i] = full[i];
  }

  std::vector<int> labels(n);
  std::transform(y.begin(), y.end(), labels.begin(), sign_to_class);
  return fit_isotonic(scores, labels);
}

Prediction predict(const TrainedModel& model, const FeatureMatrix& m) {
  const FeatureMatrix cols = model.feature_names.empty() ? m : m.subset_columns(model.feature_names);
  DenseMatrix x(cols.rows(), cols.dim(), standardized_rows(model.standardizer, cols));
  Prediction p;
  p.scores = decision_scores(model.linear, x);
  for (double s : p.scores) {
    p.classes.push_back(s >= 0.0 ? 1 : 0);
    p.probabilities.push_back(model.calibrator.breakpoints.empty() ? 0.5 : calibrate(model.calibrator, s));
  }
  return p;
}

}  // namespace turnlens
