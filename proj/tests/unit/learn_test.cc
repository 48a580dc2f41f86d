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
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "turnlens/error.h"
#include "turnlens/isotonic.h"
#include "turnlens/metrics.h"
#include "turnlens/svm.h"

using namespace turnlens;

namespace {

struct Data {
  DenseMatrix x;
  std::vector<int> y;
};

Data blobs(std::mt19937_64& rng, std::size_t n, double centre, double spread, std::size_t dim = 2) {
  std::normal_distribution<double> nd(0.0, spread);
  Data d{DenseMatrix(n, dim), std::vector<int>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    d.y[i] = i % 2 ? 1 : -1;
    for (std::size_t j = 0; j < dim; ++j) d.x(i, j) = d.y[i] * centre + nd(rng);
  }
  return d;
}

std::vector<int> to_classes(const std::vector<int>& signs) {
  std::vector<int> c;
  for (int s : signs) c.push_back(sign_to_class(s));
  return c;
}

}  // namespace

TEST_CASE("separable blobs are fit perfectly") {
  std::mt19937_64 rng(1);
  const auto d = blobs(rng, 60, 2.0, 0.2);
  SvmOptions o;
  o.C = 1.0;
  const auto m = train_svm(d.x, d.y, o);
  CHECK(predict_signs(m, d.x) == d.y);
  CHECK(m.weights.size() == 2);
  CHECK(m.C == 1.0);
}

TEST_CASE("duplicating every sample at half C leaves the decision function") {
  std::mt19937_64 rng(2);
  const auto d = blobs(rng, 40, 0.5, 1.0, 3);
  Data twice{DenseMatrix(80, 3), {}};
  for (std::size_t i = 0; i < 80; ++i) {
    for (std::size_t j = 0; j < 3; ++j) twice.x(i, j) = d.x(i % 40, j);
    twice.y.push_back(d.y[i % 40]);
  }
  SvmOptions o;
  o.C = 0.5;
  o.tolerance = 1e-8;
  const auto base = train_svm(d.x, d.y, o);
  o.C = 0.25;
  const auto dup = train_svm(twice.x, twice.y, o);
  for (std::size_t j = 0; j < 3; ++j) CHECK(dup.weights[j] == doctest::Approx(base.weights[j]).epsilon(1e-5));
  CHECK(dup.bias == doctest::Approx(base.bias).epsilon(1e-5));
  const auto a = decision_scores(base, d.x);
  const auto b = decision_scores(dup, d.x);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-5));
}

TEST_CASE("XOR has no linear separator") {
  const std::vector<std::pair<double, double>> pts{{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  const std::vector<int> cls{1, 1, 0, 0};
  CHECK(oracle::best_linear_uar_2d(pts, cls) <= 0.75 + 1e-12);
  DenseMatrix x(4, 2);
  std::vector<int> y;
  for (std::size_t i = 0; i < 4; ++i) {
    x(i, 0) = pts[i].first;
    x(i, 1) = pts[i].second;
    y.push_back(class_to_sign(cls[i]));
  }
  for (double c : default_c_grid()) {
    SvmOptions o;
    o.C = c;
    const auto m = train_svm(x, y, o);
    CHECK(uar(cls, to_classes(predict_signs(m, x))) <= 0.75);
  }
}

TEST_CASE("decision_scores") {
  LinearModel zero{{0, 0, 0}, 0.75, 1.0};
  DenseMatrix x(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(decision_scores(zero, x) == std::vector<double>{0.75, 0.75});
  LinearModel one{{1}, 0, 1.0};
  CHECK(decision_scores(one, DenseMatrix(1, 1, {3})) == std::vector<double>{3});
  CHECK(predict_signs(LinearModel{{1}, 0, 1}, DenseMatrix(2, 1, {0, -1e-9})) == std::vector<int>{1, -1});

  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 30, dim = 1 + rng() % 10;
    LinearModel m{std::vector<double>(dim), nd(rng), 1.0};
    for (auto& w : m.weights) w = nd(rng);
    DenseMatrix r(n, dim);
    for (auto& v : r.data) v = nd(rng);
    const auto s = decision_scores(m, r);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = m.bias;
      for (std::size_t j = 0; j < dim; ++j) acc += m.weights[j] * r(i, j);
      CHECK(s[i] == doctest::Approx(acc).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(decision_scores(LinearModel{{1, 2}, 0, 1}, DenseMatrix(1, 1, {1})), InvalidArgument);
}

TEST_CASE("train_svm rejects bad input") {
  DenseMatrix x(3, 1, {1, 2, 3});
  SvmOptions o;
  CHECK_THROWS_AS(train_svm(x, std::vector<int>{1, 1, 1}, o), InvalidArgument);
  CHECK_THROWS_AS(train_svm(DenseMatrix(1, 1, {1}), std::vector<int>{1}, o), InvalidArgument);
  DenseMatrix bad(2, 1, {1, std::nan("")});
  CHECK_THROWS_AS(train_svm(bad, std::vector<int>{1, -1}, o), InvalidArgument);
  o.C = 0;
  CHECK_THROWS_AS(train_svm(x, std::vector<int>{1, -1, 1}, o), InvalidArgument);
}

TEST_CASE("dual coordinate descent is monotone and closes the duality gap") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const auto d = blobs(rng, 120, 0.4, 1.0, 5);
    SvmOptions o;
    o.C = std::pow(2.0, -7.0 + 2.0 * (trial % 6));
    o.seed = static_cast<std::uint64_t>(trial);
    o.class_weights = trial % 2 == 1;
    TrainingTrace t;
    const auto m = train_svm(d.x, d.y, o, &t);
    REQUIRE(t.dual_objective.size() == t.epochs);
    for (std::size_t e = 1; e < t.dual_objective.size(); ++e)
      CHECK(t.dual_objective[e] >= t.dual_objective[e - 1] - 1e-12 * (1 + std::fabs(t.dual_objective[e])));
    CHECK((t.converged || t.epochs == o.max_epochs));
    CHECK(t.primal - t.dual < 1e-3 * (1 + std::fabs(t.primal)));
    CHECK(t.primal - t.dual >= -1e-9 * (1 + std::fabs(t.primal)));
    CHECK(primal_objective(m, d.x, d.y, o) == doctest::Approx(t.primal).epsilon(1e-9));
  }
}

TEST_CASE("training is deterministic per seed") {
  std::mt19937_64 rng(6);
  const auto d = blobs(rng, 80, 0.3, 1.0, 4);
  SvmOptions o;
  o.seed = 99;
  const auto a = train_svm(d.x, d.y, o);
  const auto b = train_svm(d.x, d.y, o);
  CHECK(a.weights == b.weights);
  CHECK(a.bias == b.bias);
}

TEST_CASE("pava and isotonic calibration") {
  CHECK(pava(std::vector<double>{0, 1, 1}) == std::vector<double>{0, 1, 1});
  CHECK(pava(std::vector<double>{1, 0, 1}) == std::vector<double>{0.5, 0.5, 1});
  const auto w = pava(std::vector<double>{1, 0}, std::vector<double>{3, 1});
  CHECK(w[0] == doctest::Approx(0.75));
  CHECK(w[1] == doctest::Approx(0.75));

  for (std::size_t n = 1; n <= 8; ++n)
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
      std::vector<double> y(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = (bits >> i) & 1u;
      const auto got = pava(y);
      const auto expect = oracle::exhaustive_isotonic(y);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(got[i] - expect[i]) < 1e-9);
    }

  const auto all_one = fit_isotonic(std::vector<double>{0.1, 0.5, 0.9}, std::vector<int>{1, 1, 1});
  CHECK(calibrate(all_one, -5) == 1.0);
  CHECK(calibrate(all_one, 5) == 1.0);

  const auto cal = fit_isotonic(std::vector<double>{-1, 0, 0, 2, 3}, std::vector<int>{0, 1, 0, 0, 1});
  // Tied scores at 0 are pooled; the flat run from 0 to 2 collapses to one step.
  CHECK(cal.breakpoints == std::vector<double>{-1, 0, 3});
  REQUIRE(cal.values.size() == 3);
  CHECK(cal.values[1] == doctest::Approx(1.0 / 3.0));
  CHECK(calibrate(cal, 2) == cal.values[1]);
  CHECK(calibrate(cal, -10) == cal.values.front());
  CHECK(calibrate(cal, 10) == cal.values.back());
  CHECK(calibrate(cal, 3) == cal.values.back());
  CHECK(calibrate(cal, -1) == cal.values.front());
  CHECK(std::is_sorted(cal.values.begin(), cal.values.end()));

  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s(30);
    std::vector<int> y(30);
    for (std::size_t i = 0; i < 30; ++i) {
      s[i] = std::round(nd(rng) * 4) / 4;
      y[i] = nd(rng) + s[i] > 0;
    }
    const auto c = fit_isotonic(s, y);
    for (int k = 0; k < 50; ++k) {
      double a = nd(rng) * 2, b = nd(rng) * 2;
      if (a > b) std::swap(a, b);
      CHECK(calibrate(c, a) <= calibrate(c, b));
      CHECK(calibrate(c, a) >= 0.0);
      CHECK(calibrate(c, b) <= 1.0);
    }
  }
  CHECK_THROWS_AS(calibrate(IsotonicCalibrator{}, 0.0), InvalidArgument);
}

TEST_CASE("uar") {
  const std::vector<int> t{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  const std::vector<int> p{0, 0, 0, 0, 1, 1, 1, 1, 0, 0};
  CHECK(uar(t, p) == doctest::Approx(0.7));
  const auto e = evaluate(t, p, 2);
  CHECK(e.at(0, 0) == 4);
  CHECK(e.at(1, 0) == 2);
  CHECK(uar_from_confusion(e.confusion, 2) == doctest::Approx(0.7));
  CHECK(uar(t, t) == 1.0);
  CHECK(uar(t, std::vector<int>(10, 1)) == 0.5);
  CHECK_THROWS_AS(uar(std::vector<int>{0, 0}, std::vector<int>{0, 1}), InvalidArgument);

  // Relabeling and within-class permutation leave the value unchanged.
  std::vector<int> tf, pf;
  for (std::size_t i = 0; i < t.size(); ++i) {
    tf.push_back(1 - t[i]);
    pf.push_back(1 - p[i]);
  }
  CHECK(uar(tf, pf) == doctest::Approx(0.7));
  std::vector<int> pp = p;
  std::swap(pp[0], pp[4]);
  CHECK(uar(t, pp) == doctest::Approx(0.7));
}

TEST_CASE("grid search") {
  std::mt19937_64 rng(8);
  const auto tr = blobs(rng, 100, 0.3, 1.0, 3);
  const auto dv = blobs(rng, 100, 0.3, 1.0, 3);
  SvmOptions o;
  const std::vector<double> one{0.125};
  CHECK(grid_search_C(tr.x, tr.y, dv.x, dv.y, one, o).best_C == 0.125);

  const auto g = default_c_grid();
  REQUIRE(g.size() == 11);
  CHECK(g.front() == std::ldexp(1.0, -15));
  CHECK(g.back() == 32.0);

  const auto r = grid_search_C(tr.x, tr.y, dv.x, dv.y, g, o, 2);
  CHECK(r.points.size() == g.size());
  double best = 0;
  for (const auto& p : r.points) best = std::max(best, p.devel_uar);
  CHECK(r.devel_uar == best);
  for (const auto& p : r.points)
    if (p.devel_uar == best) {
      CHECK(r.best_C == p.C);  // first (smallest) maximiser
      break;
    }
  o.C = 1.0;
  const auto fixed = train_svm(tr.x, tr.y, o);
  CHECK(r.devel_uar >= uar(to_classes(dv.y), to_classes(predict_signs(fixed, dv.x))));

  SUBCASE("identical UAR everywhere picks the smallest C") {
    const auto a = blobs(rng, 40, 3.0, 0.1);
    const auto b = blobs(rng, 40, 3.0, 0.1);
    const auto flat = grid_search_C(a.x, a.y, b.x, b.y, std::vector<double>{8.0, 2.0, 32.0}, o);
    for (const auto& p : flat.points) CHECK(p.devel_uar == 1.0);
    CHECK(flat.best_C == 2.0);
  }
  CHECK_THROWS_AS(grid_search_C(tr.x, tr.y, dv.x, dv.y, std::vector<double>{}, o), InvalidArgument);
}
