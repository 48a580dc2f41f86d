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
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "turnlens/error.h"
#include "turnlens/experiment.h"
#include "turnlens/feature_io.h"
#include "turnlens/model.h"
#include "turnlens/parallel.h"
#include "turnlens/version.h"

namespace turnlens {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fnv1a_hex(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["manifest"] = c.manifest.generic_string();
  j["task"] = std::string(to_string(c.task));
  j["feature_sets"] = c.feature_sets;
  j["fset_files"] = json::object();
  for (const auto& [k, v] : c.fset_files) j["fset_files"][k] = v.generic_string();
  j["merge_gap"] = c.merge_gap;
  j["c_grid"] = c.c_grid;
  j["class_weights"] = c.class_weights;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir.generic_string();
  j["bootstrap"] = c.bootstrap;
  j["calibration_folds"] = c.calibration_folds;
  return j;
}

std::vector<std::string> split_plus(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = spec.find('+', start);
    parts.push_back(spec.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string file_stem_for(const std::string& name) {
  std::string out;
  for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

struct LabeledSplit {
  std::vector<std::string> ids;
  std::vector<int> signs;  // +1 positive class
};

LabeledSplit labeled_split(const std::vector<Conversation>& convs, Split split, Task task) {
  LabeledSplit out;
  for (const auto& c : convs) {
    if (c.split != split) continue;
    const auto cls = class_index(c, task);
    if (!cls)
      throw DataError("conversation '" + c.id + "' has no " + std::string(to_string(task)) + " label");
    out.ids.push_back(c.id);
    out.signs.push_back(class_to_sign(*cls));
  }
  return out;
}

DenseMatrix dense_rows(const FeatureMatrix& m, const StandardizerParams& p) {
  return DenseMatrix(m.rows(), m.dim(), standardized_rows(p, m));
}

std::pair<double, double> bootstrap_ci(std::span<const int> truth, std::span<const int> pred, std::size_t resamples,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> uars;
  std::vector<int> t(truth.size()), p(truth.size());
  const std::size_t n = truth.size();
  std::size_t attempts = 0;
  while (uars.size() < resamples && attempts < resamples * 10) {
    ++attempts;
    std::array<bool, 2> seen{false, false};
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(rng() % n);
      t[i] = truth[k];
      p[i] = pred[k];
      seen[static_cast<std::size_t>(t[i])] = true;
    }
    if (!seen[0] || !seen[1]) continue;
    uars.push_back(evaluate(t, p, 2).uar);
  }
  if (uars.empty()) return {0.0, 0.0};
  std::sort(uars.begin(), uars.end());
  auto pick = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(uars.size() - 1) + 0.5));
    return uars[std::min(idx, uars.size() - 1)];
  };
  return {pick(0.025), pick(0.975)};
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view document, const fs::path& base_dir) {
  ExperimentConfig c;
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_relative() ? base_dir / path : path;
  };
  try {
    const json j = json::parse(document);
    c.manifest = resolve(j.at("manifest").get<std::string>());
    c.task = parse_task(j.at("task").get<std::string>());
    c.feature_sets = j.at("feature_sets").get<std::vector<std::string>>();
    if (j.contains("fset_files"))
      for (const auto& [k, v] : j["fset_files"].items()) c.fset_files[k] = resolve(v.get<std::string>());
    c.merge_gap = j.value("merge_gap", kDefaultMergeGap);
    if (j.contains("c_grid")) c.c_grid = j["c_grid"].get<std::vector<double>>();
    c.class_weights = j.value("class_weights", false);
    c.seed = j.value("seed", std::uint64_t{0});
    c.output_dir = resolve(j.value("output_dir", std::string("out")));
    c.bootstrap = j.value("bootstrap", std::size_t{0});
    c.calibration_folds = j.value("calibration_folds", std::size_t{5});
    c.jobs = j.value("jobs", 0u);
  } catch (const json::exception& e) {
    throw DataError(std::string("experiment config: ") + e.what());
  }
  if (c.feature_sets.empty()) throw DataError("experiment config: at least one feature set is required");
  if (c.c_grid.empty()) throw DataError("experiment config: empty C grid");
  for (double C : c.c_grid)
    if (!(C > 0.0)) throw DataError("experiment config: C values must be positive");
  if (!fs::exists(c.manifest)) throw DataError("experiment config: manifest '" + c.manifest.string() + "' not found");
  for (const auto& [name, path] : c.fset_files)
    if (!fs::exists(path)) throw DataError("experiment config: feature file '" + path.string() + "' not found");
  return c;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open experiment config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str(), path.parent_path());
}

FeatureMatrix extract_tt(std::span<const Conversation> conversations, double merge_gap, unsigned jobs) {
  std::vector<TTFeatureVector> vecs(conversations.size());
  parallel_for(conversations.size(), jobs, [&](std::size_t i) {
    vecs[i] = tt_features(segment_conversation(conversations[i], merge_gap));
  });
  const auto& names = TTFeatureVector::names();
  FeatureMatrix m("TT", std::vector<std::string>(names.begin(), names.end()));
  for (std::size_t i = 0; i < conversations.size(); ++i)
    m.add_row(conversations[i].id, std::span<const double>(vecs[i].values()));
  return m;
}

namespace {

RelevanceRanking rank_tt_train(const std::vector<Conversation>& convs, const FeatureMatrix& tt, Task task,
                               unsigned jobs) {
  const auto train = labeled_split(convs, Split::kTrain, task);
  if (train.ids.empty()) throw DataError("no labeled Train conversations for task " + std::string(to_string(task)));
  std::vector<int> classes(train.signs.size());
  std::transform(train.signs.begin(), train.signs.end(), classes.begin(), sign_to_class);
  return rank_relevant(tt.subset_rows(train.ids), classes, jobs);
}

}  // namespace

RelevanceRanking rank_tt(const Manifest& manifest, Task task, double merge_gap, unsigned jobs) {
  const auto convs = load_all(manifest, jobs);
  return rank_tt_train(convs, extract_tt(convs, merge_gap, jobs), task, jobs);
}

std::vector<std::string> derive_ttc(const Manifest& manifest, Task task, double merge_gap, unsigned jobs) {
  std::vector<std::string> names;
  for (const auto& r : rank_tt(manifest, task, merge_gap, jobs)) names.push_back(r.feature);
  return names;
}

bool spec_needs_tt(const std::string& spec) {
  for (const auto& part : split_plus(spec))
    if (part == "TT" || part == "TTc" || part == "TTsel") return true;
  return false;
}

FeatureMatrix build_feature_set(const std::string& spec, std::span<const Conversation> convs, const FeatureMatrix& tt,
                                const std::map<std::string, fs::path>& fset_files, Task task,
                                std::vector<std::string>* selected) {
  auto build_part = [&](const std::string& part) -> FeatureMatrix {
    if ((part == "TT" || part == "TTc" || part == "TTsel") && tt.dim() != kNumTTFeatures)
      throw InvalidArgument("build_feature_set: '" + part + "' needs the TT matrix");
    if (part == "TT") return tt;
    if (part == "TTc") {
      FeatureMatrix m = tt.subset_columns(default_ttc_names());
      m.set_set_name("TTc");
      return m;
    }
    if (part == "TTsel") {
      const std::vector<Conversation> all(convs.begin(), convs.end());
      std::vector<std::string> names;
      for (const auto& r : rank_tt_train(all, tt, task, 1)) names.push_back(r.feature);
      if (selected) *selected = names;
      if (names.empty()) {
        spdlog::warn("TTsel: no feature has positive information gain; keeping all of TT");
        FeatureMatrix m = tt;
        m.set_set_name("TTsel");
        return m;
      }
      FeatureMatrix m = tt.subset_columns(names);
      m.set_set_name("TTsel");
      return m;
    }
    auto it = fset_files.find(part);
    if (it == fset_files.end()) throw DataError("unknown feature set '" + part + "'");
    FeatureMatrix m = read_fset(it->second);
    m.set_set_name(part);
    return m;
  };

  std::vector<FeatureMatrix> parts;
  const auto pieces = fset_files.count(spec) ? std::vector<std::string>{spec} : split_plus(spec);
  for (const auto& p : pieces) parts.push_back(build_part(p));
  return concat_feature_sets(parts);
}

FeatureSetResult fit_feature_set(const FeatureMatrix& features, std::span<const Conversation> convs, Task task,
                                 const TrainSettings& settings, TrainedModel* model_out) {
  const std::vector<Conversation> all(convs.begin(), convs.end());
  const auto train = labeled_split(all, Split::kTrain, task);
  const auto devel = labeled_split(all, Split::kDevel, task);
  if (train.ids.empty() || devel.ids.empty()) throw DataError("training needs labeled Train and Devel conversations");
  for (const auto* ids : {&train.ids, &devel.ids})
    for (const auto& id : *ids)
      if (!features.contains(id))
        throw DataError("feature set '" + features.set_name() + "' has no row for conversation '" + id + "'");

  const FeatureMatrix tr = features.subset_rows(train.ids);
  const FeatureMatrix dv = features.subset_rows(devel.ids);
  const StandardizerParams std_params = fit_standardizer(tr);
  const DenseMatrix x_tr = dense_rows(tr, std_params);
  const DenseMatrix x_dv = dense_rows(dv, std_params);

  SvmOptions opts;
  opts.class_weights = settings.class_weights;
  opts.seed = settings.seed;
  auto grid = grid_search_C(x_tr, train.signs, x_dv, devel.signs, settings.c_grid, opts, 1);

  FeatureSetResult res;
  res.name = features.set_name();
  res.dim = features.dim();
  res.best_C = grid.best_C;
  res.devel_uar = grid.devel_uar;
  res.devel_eval = grid.devel_eval;
  res.grid = grid.points;
  res.train_count = tr.rows();
  res.devel_count = dv.rows();

  if (settings.bootstrap > 0) {
    std::vector<int> truth, pred;
    for (int s : devel.signs) truth.push_back(sign_to_class(s));
    for (int s : predict_signs(grid.model, x_dv)) pred.push_back(sign_to_class(s));
    res.uar_ci95 = bootstrap_ci(truth, pred, settings.bootstrap, settings.bootstrap_seed);
  }

  if (model_out) {
    SvmOptions best = opts;
    best.C = grid.best_C;
    TrainedModel& model = *model_out;
    model.set_name = features.set_name();
    model.feature_names = features.feature_names();
    const auto names = class_names(task);
    model.negative_label = std::string(names[0]);
    model.positive_label = std::string(names[1]);
    model.linear = grid.model;
    model.standardizer = std_params;
    model.calibrator = calibrate_out_of_fold(x_tr, train.signs, best, settings.calibration_folds);
  }
  return res;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  const unsigned jobs = resolve_jobs(config.jobs);
  const Manifest manifest = load_manifest(config.manifest);
  const auto convs = load_all(manifest, jobs);
  spdlog::info("loaded {} conversations", convs.size());

  bool need_tt = false;
  for (const auto& spec : config.feature_sets) need_tt = need_tt || spec_needs_tt(spec);
  FeatureMatrix tt;
  if (need_tt) tt = extract_tt(convs, config.merge_gap, jobs);

  fs::create_directories(config.output_dir);
  std::vector<FeatureSetResult> results(config.feature_sets.size());
  parallel_for(config.feature_sets.size(), jobs, [&](std::size_t k) {
    const std::string& spec = config.feature_sets[k];
    std::vector<std::string> selected;
    const FeatureMatrix all = build_feature_set(spec, convs, tt, config.fset_files, config.task, &selected);

    TrainSettings settings;
    settings.c_grid = config.c_grid;
    settings.class_weights = config.class_weights;
    settings.seed = config.seed;
    settings.calibration_folds = config.calibration_folds;
    settings.bootstrap = config.bootstrap;
    settings.bootstrap_seed = config.seed + 0x1000193ULL * (k + 1);
    TrainedModel model;
    FeatureSetResult& res = results[k];
    res = fit_feature_set(all, convs, config.task, settings, &model);
    res.name = spec;
    res.selected = std::move(selected);
    res.model_file = "model_" + file_stem_for(spec) + ".json";
    save_model(config.output_dir / res.model_file, model);
    spdlog::info("{}: dim {} best C {} devel UAR {:.4f}", spec, res.dim, res.best_C, res.devel_uar);
  });

  ExperimentReport report;
  report.version = kVersion;
  report.config_echo = config_to_json(config).dump();
  report.config_hash = fnv1a_hex(report.config_echo);
  report.seed = config.seed;
  report.task = config.task;
  report.results = std::move(results);

  std::ofstream(config.output_dir / "report.json", std::ios::binary | std::ios::trunc) << report_to_json(report) << '\n';
  std::ofstream(config.output_dir / "report.txt", std::ios::binary | std::ios::trunc) << report_to_text(report);
  return report;
}

std::string report_to_json(const ExperimentReport& r) {
  json j;
  j["tool"] = "turnlens";
  j["version"] = r.version;
  j["config_hash"] = r.config_hash;
  j["config"] = json::parse(r.config_echo);
  j["seed"] = r.seed;
  j["task"] = std::string(to_string(r.task));
  j["results"] = json::array();
  for (const auto& s : r.results) {
    json e;
    e["feature_set"] = s.name;
    e["dim"] = s.dim;
    if (!s.selected.empty() || s.name.find("TTsel") != std::string::npos) e["selected"] = s.selected;
    e["best_C"] = s.best_C;
    e["devel_uar"] = s.devel_uar;
    e["train_count"] = s.train_count;
    e["devel_count"] = s.devel_count;
    e["confusion"] = s.devel_eval.confusion;
    e["recall"] = s.devel_eval.recall;
    json grid = json::array();
    for (const auto& g : s.grid) grid.push_back({{"C", g.C}, {"devel_uar", g.devel_uar}});
    e["grid"] = grid;
    if (s.uar_ci95) e["uar_ci95"] = {s.uar_ci95->first, s.uar_ci95->second};
    e["model_file"] = s.model_file;
    j["results"].push_back(std::move(e));
  }
  return j.dump(1);
}

std::string report_to_text(const ExperimentReport& r) {
  std::size_t width = std::string_view("Feature set").size();
  for (const auto& s : r.results) width = std::max(width, s.name.size());
  std::ostringstream out;
  char line[256];
  out << "Task: " << to_string(r.task) << "  (seed " << r.seed << ", config " << r.config_hash << ")\n";
  const bool any_ci = std::any_of(r.results.begin(), r.results.end(), [](const auto& s) { return s.uar_ci95.has_value(); });
  std::snprintf(line, sizeof line, "%-*s  %6s  %12s  %7s%s\n", static_cast<int>(width), "Feature set", "Dim",
                "Best C", "UAR%", any_ci ? "  95% CI" : "");
  out << line;
  for (const auto& s : r.results) {
    std::snprintf(line, sizeof line, "%-*s  %6zu  %12.6g  %7.1f", static_cast<int>(width), s.name.c_str(), s.dim,
                  s.best_C, 100.0 * s.devel_uar);
    out << line;
    if (s.uar_ci95) {
      std::snprintf(line, sizeof line, "  [%.1f, %.1f]", 100.0 * s.uar_ci95->first, 100.0 * s.uar_ci95->second);
      out << line;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace turnlens
