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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "turnlens/features.h"
#include "turnlens/selection.h"
#include "turnlens/svm.h"
#include "turnlens/synth.h"
#include "turnlens/turntaking.h"

namespace {

using namespace turnlens;

GeneratedConversation conversation(double seconds) {
  auto cfg = two_profile_config(3.0, seconds);
  return generate_conversation(cfg.profiles[1], 12345);
}

void BM_LabelSegments(benchmark::State& state) {
  const auto g = conversation(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(label_segments(g.customer, g.agent));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.customer.size() + g.agent.size()));
}
BENCHMARK(BM_LabelSegments)->Arg(60)->Arg(600)->Arg(3600);

void BM_TTFeatures(benchmark::State& state) {
  const auto g = conversation(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tt_features(g.segments));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.segments.segments.size()));
}
BENCHMARK(BM_TTFeatures)->Arg(60)->Arg(600)->Arg(3600);

void BM_PoolFunctionals(benchmark::State& state) {
  FrameMatrix fm;
  fm.id = "bench";
  fm.dim = 768;
  const auto frames = static_cast<std::size_t>(state.range(0));
  fm.frames.resize(frames * fm.dim);
  std::mt19937 rng(1);
  std::normal_distribution<float> nd;
  for (auto& f : fm.frames) f = nd(rng);
  for (auto _ : state) benchmark::DoNotOptimize(pool_functionals(fm));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(fm.frames.size() * sizeof(float)));
}
BENCHMARK(BM_PoolFunctionals)->Arg(500)->Arg(15000);

void BM_DiscretizeMdlp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  std::vector<double> x(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<int>(rng() & 1);
    x[i] = nd(rng) + 0.8 * y[i];
  }
  for (auto _ : state) benchmark::DoNotOptimize(discretize_mdlp(x, y));
}
BENCHMARK(BM_DiscretizeMdlp)->Arg(600)->Arg(10000);

void BM_TrainSvm(benchmark::State& state) {
  const std::size_t n = 600, d = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  DenseMatrix x(n, d);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = i % 2 ? 1 : -1;
    for (std::size_t j = 0; j < d; ++j) x(i, j) = nd(rng) + (j < 3 ? 0.5 * y[i] : 0.0);
  }
  SvmOptions o;
  o.C = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(train_svm(x, y, o));
}
BENCHMARK(BM_TrainSvm)->Arg(6)->Arg(64)->Arg(768)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
