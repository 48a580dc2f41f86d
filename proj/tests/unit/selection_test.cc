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
#include <random>
#include <set>

#include "doctest.h"
#include "generators.h"
#include "turnlens/error.h"
#include "turnlens/selection.h"
#include "turnlens/turntaking.h"

using namespace turnlens;

namespace {

ContingencyTable table(std::vector<std::vector<std::size_t>> rows) {
  ContingencyTable t(rows.size(), rows.front().size());
  for (std::size_t b = 0; b < rows.size(); ++b)
    for (std::size_t c = 0; c < rows[b].size(); ++c) t.at(b, c) = rows[b][c];
  return t;
}

std::vector<int> random_labels(std::mt19937_64& rng, std::size_t n) {
  std::vector<int> y(n);
  for (auto& v : y) v = static_cast<int>(rng() & 1);
  return y;
}

}  // namespace

TEST_CASE("entropy") {
  CHECK(entropy(std::vector<std::size_t>{5, 5}) == doctest::Approx(1.0));
  CHECK(entropy(std::vector<std::size_t>{10, 0}) == 0.0);
  CHECK(entropy(std::vector<std::size_t>{3, 1}) == doctest::Approx(0.811278).epsilon(1e-6));
  CHECK_THROWS_AS(entropy(std::vector<std::size_t>{0, 0}), InvalidArgument);
}

TEST_CASE("information_gain_binned worked examples") {
  CHECK(information_gain_binned(table({{3, 1}, {3, 1}})) == doctest::Approx(0.0));
  CHECK(information_gain_binned(table({{2, 0}, {0, 2}})) == doctest::Approx(1.0));
  CHECK(std::fabs(information_gain_binned(table({{2, 0}, {1, 1}})) - 0.311278) < 1e-6);
  CHECK_THROWS_AS(information_gain_binned(table({{0, 0}})), InvalidArgument);
}

TEST_CASE("information gain bounds and permutation invariance") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t bins = 1 + rng() % 6, classes = 2 + rng() % 3;
    std::vector<std::vector<std::size_t>> rows(bins, std::vector<std::size_t>(classes));
    std::size_t total = 0;
    for (auto& r : rows)
      for (auto& c : r) total += (c = rng() % 12);
    if (total == 0) rows[0][0] = 1;
    const auto t = table(rows);
    const double g = information_gain_binned(t);
    const double h = entropy(t.class_totals());
    CHECK(g >= -1e-12);
    CHECK(g <= std::min(h, std::log2(static_cast<double>(bins))) + 1e-12);

    auto shuffled = rows;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(information_gain_binned(table(shuffled)) == doctest::Approx(g).epsilon(1e-12));
    for (auto& r : shuffled) std::reverse(r.begin(), r.end());
    CHECK(information_gain_binned(table(shuffled)) == doctest::Approx(g).epsilon(1e-12));
  }
}

TEST_CASE("MDLP accepts the perfectly separated n=8 split") {
  const std::vector<double> x{1, 1, 1, 1, 2, 2, 2, 2};
  const std::vector<int> y{0, 0, 0, 0, 1, 1, 1, 1};
  const auto cuts = discretize_mdlp(x, y);
  REQUIRE(cuts.size() == 1);
  CHECK(cuts[0] > 1.0);
  CHECK(cuts[0] < 2.0);
  // Hand evaluation of the acceptance threshold: both halves are pure, k = 2.
  const double delta = std::log2(7.0) - 2.0;
  const double threshold = (std::log2(7.0) + delta) / 8.0;
  CHECK(threshold == doctest::Approx(0.4518).epsilon(1e-4));
  const auto t = tabulate(x, y, cuts, 2);
  CHECK(information_gain_binned(t) == doctest::Approx(1.0));
  CHECK(information_gain_binned(t) > threshold);
}

TEST_CASE("MDLP returns no cuts for constant values or labels") {
  const std::vector<double> c(50, 3.5);
  std::mt19937_64 rng(1);
  CHECK(discretize_mdlp(c, random_labels(rng, 50)).empty());
  std::vector<double> v(50);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  CHECK(discretize_mdlp(v, std::vector<int>(50, 1)).empty());
}

TEST_CASE("MDLP mostly finds nothing when labels ignore the values") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> nd;
  int empty = 0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) {
    std::vector<double> x(200);
    for (auto& v : x) v = nd(rng);
    if (discretize_mdlp(x, random_labels(rng, 200)).empty()) ++empty;
  }
  CHECK(empty >= seeds * 95 / 100);
}

TEST_CASE("MDLP recovers a three-way split") {
  std::vector<double> x;
  std::vector<int> y;
  for (int i = 0; i < 90; ++i) {
    x.push_back(i);
    y.push_back(i < 30 || i >= 60 ? 0 : 1);
  }
  const auto cuts = discretize_mdlp(x, y);
  CHECK(cuts == std::vector<double>{29.5, 59.5});
}

TEST_CASE("rank_relevant") {
  std::mt19937_64 rng(3);
  SUBCASE("constant matrix") {
    FeatureMatrix m("C", {"a", "b"});
    for (int i = 0; i < 20; ++i) {
      const std::vector<float> row{1, 2};
      m.add_row("r" + std::to_string(i), std::span<const float>(row));
    }
    CHECK(rank_relevant(m, random_labels(rng, 20)).empty());
  }
  SUBCASE("label copy ranks first with full class entropy") {
    auto m = testing::random_matrix(rng, "R", 100, 4);
    const auto y = random_labels(rng, 100);
    FeatureMatrix with("R", {"f0", "f1", "f2", "f3", "copy"});
    std::size_t ones = 0;
    for (std::size_t i = 0; i < 100; ++i) {
      std::vector<float> row(m.row(i).begin(), m.row(i).end());
      row.push_back(static_cast<float>(y[i]));
      ones += static_cast<std::size_t>(y[i]);
      with.add_row(m.ids()[i], std::span<const float>(row));
    }
    const auto r = rank_relevant(with, y);
    REQUIRE_FALSE(r.empty());
    CHECK(r[0].feature == "copy");
    CHECK(r[0].gain_bits == doctest::Approx(entropy(std::vector<std::size_t>{100 - ones, ones})).epsilon(1e-12));
  }
  SUBCASE("label size mismatch") {
    const auto m = testing::random_matrix(rng, "R", 10, 2);
    CHECK_THROWS_AS(rank_relevant(m, random_labels(rng, 9)), DataError);
  }
}

TEST_CASE("rank_relevant finds exactly the injected TT features") {
  std::mt19937_64 rng(2024);
  const auto& all = TTFeatureVector::names();
  const std::vector<std::string> names(all.begin(), all.end());
  const auto& target = default_ttc_names();
  const std::set<std::string> signal(target.begin(), target.end());
  std::normal_distribution<float> nd;
  const std::size_t n = 400;
  const auto y = random_labels(rng, n);
  FeatureMatrix m("TT", names);
  std::vector<float> row(names.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < names.size(); ++j)
      row[j] = nd(rng) + (signal.contains(names[j]) ? 2.5f * static_cast<float>(y[i]) : 0.0f);
    m.add_row("c" + std::to_string(i), std::span<const float>(row));
  }
  const auto r = rank_relevant(m, y, 2);
  std::set<std::string> got;
  for (const auto& f : r) got.insert(f.feature);
  CHECK(got == signal);
  for (std::size_t i = 1; i < r.size(); ++i)
    CHECK((r[i - 1].gain_bits > r[i].gain_bits ||
           (r[i - 1].gain_bits == r[i].gain_bits && r[i - 1].feature < r[i].feature)));

  SUBCASE("monotone transforms do not change the ranking") {
    FeatureMatrix t("TT", names);
    for (std::size_t i = 0; i < n; ++i) {
      const auto src = m.row(i);
      for (std::size_t j = 0; j < names.size(); ++j) row[j] = 3.0f * src[j] + 11.0f;
      t.add_row(m.ids()[i], std::span<const float>(row));
    }
    const auto rt = rank_relevant(t, y);
    REQUIRE(rt.size() == r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(rt[i].feature == r[i].feature);
      CHECK(rt[i].gain_bits == doctest::Approx(r[i].gain_bits).epsilon(1e-12));
    }
  }
  SUBCASE("json export") {
    const auto js = ranking_to_json(r);
    CHECK(js.front() == '[');
    CHECK(js.find("\"gain_bits\"") != std::string::npos);
  }
}
