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

#include "commands.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "turnlens/error.h"
#include "turnlens/experiment.h"
#include "turnlens/feature_io.h"
#include "turnlens/logging.h"
#include "turnlens/model.h"
#include "turnlens/parallel.h"
#include "turnlens/synth.h"
#include "turnlens/turntaking.h"

namespace turnlens::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Writes text to `out`, or to standard output when `out` is empty.
void emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    std::fflush(stdout);
    return;
  }
  std::ofstream f(out, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot write '" + out + "'");
  f << text;
}

void add_jobs(CLI::App* cmd, unsigned& jobs) {
  cmd->add_option("--jobs", jobs, "Worker threads (0 = all logical cores)")->capture_default_str();
}

void add_seed(CLI::App* cmd, std::uint64_t& seed) {
  cmd->add_option("--seed", seed, "Random seed")->capture_default_str();
}

void add_merge_gap(CLI::App* cmd, double& gap) {
  cmd->add_option("--merge-gap", gap, "Pauses shorter than this (seconds) are merged into one talkspurt")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

CLI::Option* add_task(CLI::App* cmd, std::string& task) {
  return cmd->add_option("--task", task, "Classification task")
      ->check(CLI::IsMember({"request", "complaint"}))
      ->required();
}

// NAME=PATH pairs naming FSET files for feature-set expressions.
std::map<std::string, fs::path> parse_fset_pairs(const std::vector<std::string>& pairs) {
  std::map<std::string, fs::path> out;
  for (const auto& p : pairs) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == p.size())
      throw CLI::ValidationError("--fset", "expected NAME=PATH, got '" + p + "'");
    out[p.substr(0, eq)] = p.substr(eq + 1);
  }
  return out;
}

struct FeatureArgs {
  std::string manifest;
  std::string task;
  std::string set = "TT";
  std::vector<std::string> fsets;
  double merge_gap = kDefaultMergeGap;
  unsigned jobs = 0;
};

void add_feature_args(CLI::App* cmd, FeatureArgs& a) {
  cmd->add_option("--manifest", a.manifest, "Corpus manifest (JSON)")->required()->check(CLI::ExistingFile);
  add_task(cmd, a.task);
  cmd->add_option("--set", a.set, "Feature set: TT, TTc, TTsel, an --fset name, or A+B")->capture_default_str();
  cmd->add_option("--fset", a.fsets, "Named feature file, NAME=PATH (repeatable)");
  add_merge_gap(cmd, a.merge_gap);
  add_jobs(cmd, a.jobs);
}

struct LoadedFeatures {
  std::vector<Conversation> convs;
  FeatureMatrix features;
};

LoadedFeatures load_features(const FeatureArgs& a) {
  const unsigned jobs = resolve_jobs(a.jobs);
  LoadedFeatures out;
  out.convs = load_all(load_manifest(a.manifest), jobs);
  FeatureMatrix tt;
  if (spec_needs_tt(a.set)) tt = extract_tt(out.convs, a.merge_gap, jobs);
  out.features = build_feature_set(a.set, out.convs, tt, parse_fset_pairs(a.fsets), parse_task(a.task));
  return out;
}

std::string require_out(const std::string& out, const char* what) {
  if (out.empty()) throw CLI::RequiredError(std::string("--out (") + what + " is a binary file)");
  return out;
}

}  // namespace

void register_segment(CLI::App& app) {
  struct Args {
    std::string in, out;
    double merge_gap = kDefaultMergeGap;
  };
  auto a = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("segment", "Label one conversation with segment types S1-S8");
  cmd->add_option("--in", a->in, "Conversation document (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", a->out, "Output file (default: standard output)");
  add_merge_gap(cmd, a->merge_gap);
  cmd->callback([a] {
    const auto seq = segment_conversation(load_conversation(a->in), a->merge_gap);
    emit(a->out, segments_to_json(seq) + "\n");
  });
}

void register_tt(CLI::App& app) {
  struct Args {
    std::string manifest, out;
    double merge_gap = kDefaultMergeGap;
    unsigned jobs = 0;
  };
  auto a = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("tt", "Compute the 64 turn-taking features for every conversation");
  cmd->add_option("--manifest", a->manifest, "Corpus manifest (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", a->out, "Output FSET file; names go to <out>.names.json");
  add_merge_gap(cmd, a->merge_gap);
  add_jobs(cmd, a->jobs);
  cmd->callback([a] {
    const auto out = require_out(a->out, "FSET");
    const unsigned jobs = resolve_jobs(a->jobs);
    const auto convs = load_all(load_manifest(a->manifest), jobs);
    write_fset(out, extract_tt(convs, a->merge_gap, jobs));
    std::fprintf(stderr, "wrote %zu x %zu TT matrix to %s\n", convs.size(), kNumTTFeatures, out.c_str());
  });
}

void register_select(CLI::App& app) {
  struct Args {
    std::string manifest, task, out;
    double merge_gap = kDefaultMergeGap;
    unsigned jobs = 0;
  };
  auto a = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("select", "Rank TT features by information gain on the Train split");
  cmd->add_option("--manifest", a->manifest, "Corpus manifest (JSON)")->required()->check(CLI::ExistingFile);
  add_task(cmd, a->task);
  cmd->add_option("--out", a->out, "Output file (default: standard output)");
  add_merge_gap(cmd, a->merge_gap);
  add_jobs(cmd, a->jobs);
  cmd->callback([a] {
    const auto ranking = rank_tt(load_manifest(a->manifest), parse_task(a->task), a->merge_gap, resolve_jobs(a->jobs));
    if (ranking.empty()) std::fprintf(stderr, "no feature has positive information gain\n");
    emit(a->out, ranking_to_json(ranking) + "\n");
  });
}

void register_pool(CLI::App& app) {
  struct Args {
    std::string in, out, name = "pooled";
    unsigned jobs = 0;
  };
  auto a = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("pool", "Pool FRMX frame matrices into Mean|Sd|Kurt|Skew vectors");
  cmd->add_option("--in", a->in, "Directory of .frmx files")->required()->check(CLI::ExistingDirectory);
  cmd->add_option("--out", a->out, "Output FSET file");
  cmd->add_option("--name", a->name, "Feature-set name stored in the file")->capture_default_str();
  add_jobs(cmd, a->jobs);
  cmd->callback([a] {
    const auto out = require_out(a->out, "FSET");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(a->in))
      if (e.is_regular_file() && e.path().extension() == ".frmx") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw DataError("no .frmx files in '" + a->in + "'");

    std::vector<std::string> ids(files.size());
    std::vector<std::vector<double>> pooled(files.size());
    std::vector<std::uint32_t> dims(files.size());
    parallel_for(files.size(), resolve_jobs(a->jobs), [&](std::size_t i) {
      const auto fm = read_frmx(files[i]);
      ids[i] = fm.id;
      dims[i] = fm.dim;
      pooled[i] = pool_functionals(fm);
    });
    for (std::size_t i = 1; i < dims.size(); ++i)
      if (dims[i] != dims[0])
        throw DataError("'" + files[i].string() + "' has dimension " + std::to_string(dims[i]) + ", expected " +
                        std::to_string(dims[0]));
    FeatureMatrix m(a->name, functional_names(dims[0]));
    for (std::size_t i = 0; i < files.size(); ++i) m.add_row(ids[i], std::span<const double>(pooled[i]));
    write_fset(out, m);
    std::fprintf(stderr, "pooled %zu files into %zu features\n", files.size(), m.dim());
  });
}

void register_concat(CLI::App& app) {
  struct Args {
    std::vector<std::string> in;
    std::string out;
  };
  auto a = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("concat", "Concatenate feature sets that cover the same ids");
  cmd->add_option("--in", a->in, "Input FSET files (repeatable, in order)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", a->out, "Output FSET file");
  cmd->callback([a] {
    const auto out = require_out(a->out, "FSET");
    std::vector<FeatureMatrix> sets;
    for (const auto& p : a->in) sets.push_back(read_fset(p));
    const auto m = concat_feature_sets(sets);
    write_fset(out, m);
    std::fprintf(stderr, "%s: %zu rows x %zu features\n", m.set_name().c_str(), m.rows(), m.dim());
  });
}

void register_train(CLI::App& app) {
  struct Args {
    FeatureArgs f;
    std::vector<double> c_values;
    bool class_weights = false;
    std::uint64_t seed = 0;
    std::size_t folds = 5;
    std::string out;
  };
  auto a = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("train", "Train a calibrated linear SVM, choosing C by Devel UAR");
  add_feature_args(cmd, a->f);
  cmd->add_option("--C", a->c_values, "Candidate C values (repeatable; default 2^-15 .. 2^5 step x4)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--class-weights", a->class_weights, "Weight classes by inverse frequency");
  cmd->add_option("--calibration-folds", a->folds, "Folds for out-of-fold calibration on Train")
      ->check(CLI::Range(2, 100))
      ->capture_default_str();
  add_seed(cmd, a->seed);
  cmd->add_option("--out", a->out, "Model file (default: standard output)");
  cmd->callback([a] {
    const auto data = load_features(a->f);
    TrainSettings s;
    if (!a->c_values.empty()) s.c_grid = a->c_values;
    s.class_weights = a->class_weights;
    s.seed = a->seed;
    s.calibration_folds = a->folds;
    TrainedModel model;
    const auto res = fit_feature_set(data.features, data.convs, parse_task(a->f.task), s, &model);
    std::fprintf(stderr, "%s: dim %zu, best C %g, devel UAR %.4f\n", a->f.set.c_str(), res.dim, res.best_C,
                 res.devel_uar);
    emit(a->out, model_to_json(model) + "\n");
  });
}

void register_eval(CLI::App& app) {
  struct Args {
    FeatureArgs f;
    std::string model, split = "devel", out;
  };
  auto a = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("eval", "Score a split with a trained model and report UAR");
  cmd->add_option("--model", a->model, "Model file written by train or experiment")
      ->required()
      ->check(CLI::ExistingFile);
  add_feature_args(cmd, a->f);
  cmd->add_option("--split", a->split, "Split to score")
      ->check(CLI::IsMember({"train", "devel", "all"}))
      ->capture_default_str();
  cmd->add_option("--out", a->out, "Output file (default: standard output)");
  cmd->callback([a] {
    const auto model = load_model(a->model);
    const auto data = load_features(a->f);
    const Task task = parse_task(a->f.task);

    std::vector<std::string> ids;
    std::vector<std::optional<int>> truth;
    for (const auto& c : data.convs) {
      if (a->split != "all" && to_string(c.split) != a->split) continue;
      ids.push_back(c.id);
      truth.push_back(class_index(c, task));
    }
    if (ids.empty()) throw DataError("no conversation in split '" + a->split + "'");
    const auto pred = predict(model, data.features.subset_rows(ids));

    json j;
    j["model"] = model.set_name;
    j["split"] = a->split;
    j["task"] = a->f.task;
    json rows = json::array();
    std::vector<int> t, p;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      rows.push_back({{"id", ids[i]},
                      {"score", pred.scores[i]},
                      {"predicted", pred.classes[i] ? model.positive_label : model.negative_label},
                      {"probability", pred.probabilities[i]}});
      if (truth[i]) {
        t.push_back(*truth[i]);
        p.push_back(pred.classes[i]);
      }
    }
    j["labeled"] = t.size();
    if (!t.empty() && std::count(t.begin(), t.end(), 1) > 0 && std::count(t.begin(), t.end(), 0) > 0) {
      const auto e = evaluate(t, p, 2);
      j["uar"] = e.uar;
      j["recall"] = e.recall;
      j["confusion"] = e.confusion;
      std::fprintf(stderr, "%s on %s: UAR %.4f over %zu labeled conversations\n", model.set_name.c_str(),
                   a->split.c_str(), e.uar, t.size());
    } else {
      j["uar"] = nullptr;
      std::fprintf(stderr, "UAR undefined: the scored split does not contain both classes\n");
    }
    j["predictions"] = std::move(rows);
    emit(a->out, j.dump(1) + "\n");
  });
}

void register_experiment(CLI::App& app) {
  struct Args {
    std::string config, out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> jobs;
  };
  auto a = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("experiment", "Run a config-driven train/devel experiment");
  cmd->add_option("--config", a->config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", a->out, "Output directory (overrides output_dir in the config)");
  cmd->add_option("--seed", a->seed, "Seed (overrides the config)");
  cmd->add_option("--jobs", a->jobs, "Worker threads (overrides the config; 0 = all cores)");
  cmd->callback([a] {
    auto cfg = load_experiment_config(a->config);
    if (!a->out.empty()) cfg.output_dir = a->out;
    if (a->seed) cfg.seed = *a->seed;
    if (a->jobs) cfg.jobs = *a->jobs;
    const auto report = run_experiment(cfg);
    std::fputs(report_to_text(report).c_str(), stdout);
    std::fprintf(stderr, "report written to %s\n", (cfg.output_dir / "report.json").string().c_str());
  });
}

void register_synth(CLI::App& app) {
  struct Args {
    std::string config, out;
    std::size_t n = 1200;
    std::uint64_t seed = 0;
    unsigned jobs = 0;
    double pause_factor = 3.0;
    double target_duration = 180.0;
    bool dump_config = false;
  };
  auto a = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("synth", "Generate a labeled synthetic corpus from Markov profiles");
  cmd->add_option("--config", a->config, "Profile config (JSON); default: built-in two-profile pause setup")
      ->check(CLI::ExistingFile);
  cmd->add_option("--n", a->n, "Number of conversations")->check(CLI::Range(std::size_t{2}, std::size_t{10000000}))
      ->capture_default_str();
  cmd->add_option("--pause-factor", a->pause_factor, "Built-in setup: S5/S7 duration ratio of complaint to control")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--target-duration", a->target_duration, "Built-in setup: conversation length in seconds")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_flag("--dump-config", a->dump_config, "Print the effective profile config instead of generating");
  cmd->add_option("--out", a->out, "Output directory (conversations/ and manifest.json)");
  add_seed(cmd, a->seed);
  add_jobs(cmd, a->jobs);
  cmd->callback([a] {
    const SynthConfig cfg =
        a->config.empty() ? two_profile_config(a->pause_factor, a->target_duration) : load_synth_config(a->config);
    if (a->dump_config) {
      emit(a->out, synth_config_to_json(cfg) + "\n");
      return;
    }
    if (a->out.empty()) throw CLI::RequiredError("--out");
    const auto entries = generate_dataset(cfg, a->n, a->seed, a->out, resolve_jobs(a->jobs));
    std::fprintf(stderr, "wrote %zu conversations to %s\n", entries.size(), a->out.c_str());
  });
}

}  // namespace turnlens::cli
