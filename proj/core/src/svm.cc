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
#include <limits>
#include <numeric>
#include <random>

#include "turnlens/error.h"
#include "turnlens/parallel.h"
#include "turnlens/svm.h"

namespace turnlens {

namespace {

std::vector<double> upper_bounds(std::span<const int> y, const SvmOptions& o) {
  std::size_t pos = 0;
  for (int v : y) pos += v > 0;
  const std::size_t neg = y.size() - pos;
  const double n = static_cast<double>(y.size());
  double cw_pos = 1.0, cw_neg = 1.0;
  if (o.class_weights) {
    cw_pos = n / (2.0 * static_cast<double>(pos));
    cw_neg = n / (2.0 * static_cast<double>(neg));
  }
  std::vector<double> u(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) u[i] = o.C * (y[i] > 0 ? cw_pos : cw_neg);
  return u;
}

// w.x + b with the bias folded in as a unit feature.
double augmented_dot(std::span<const double> w, double b, std::span<const double> x) {
  double s = b;
  for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * x[j];
  return s;
}

void check_inputs(const DenseMatrix& x, std::span<const int> y, const SvmOptions& o) {
  if (x.rows != y.size()) throw InvalidArgument("train_svm: row count and label count differ");
  if (!(o.C > 0.0) || !std::isfinite(o.C)) throw InvalidArgument("train_svm: C must be positive");
  if (x.rows < 2) throw InvalidArgument("train_svm: need at least two samples");
  bool pos = false, neg = false;
  for (int v : y) {
    if (v != 1 && v != -1) throw InvalidArgument("train_svm: labels must be +1 or -1");
    (v > 0 ? pos : neg) = true;
  }
  if (!pos || !neg) throw InvalidArgument("train_svm: single-class input");
  for (double v : x.data)
    if (!std::isfinite(v)) throw InvalidArgument("train_svm: non-finite feature value");
}

}  // namespace

LinearModel train_svm(const DenseMatrix& x, std::span<const int> y, const SvmOptions& o, TrainingTrace* trace) {
  check_inputs(x, y, o);
  const std::size_t n = x.rows;
  const std::size_t d = x.cols;
  const std::vector<double> upper = upper_bounds(y, o);

  std::vector<double> qd(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 1.0;  // bias feature
    for (double v : x.row(i)) s += v * v;
    qd[i] = s;
  }

  std::vector<double> alpha(n, 0.0);
  std::vector<double> w(d, 0.0);
  double b = 0.0;
  double alpha_sum = 0.0;

  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), std::size_t{0});
  std::size_t active = n;

  std::mt19937_64 rng(o.seed);
  double pg_max_old = std::numeric_limits<double>::infinity();
  double pg_min_old = -std::numeric_limits<double>::infinity();

  TrainingTrace local;
  std::size_t epoch = 0;
  double violation = std::numeric_limits<double>::infinity();
  bool converged = false;

  auto dual_value = [&] {
    double ww = b * b;
    for (double v : w) ww += v * v;
    return alpha_sum - 0.5 * ww;
  };

  while (epoch < o.max_epochs) {
    ++epoch;
    for (std::size_t k = 0; k + 1 < active; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(rng() % (active - k));
      std::swap(index[k], index[j]);
    }

    double pg_max_new = -std::numeric_limits<double>::infinity();
    double pg_min_new = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < active; ++s) {
      const std::size_t i = index[s];
      const double yi = static_cast<double>(y[i]);
      const auto xi = x.row(i);
      const double g = yi * augmented_dot(w, b, xi) - 1.0;

      double pg = 0.0;
      if (alpha[i] == 0.0) {
        if (g > pg_max_old) {
          --active;
          std::swap(index[s], index[active]);
          --s;
          continue;
        }
        if (g < 0.0) pg = g;
      } else if (alpha[i] == upper[i]) {
        if (g < pg_min_old) {
          --active;
          std::swap(index[s], index[active]);
          --s;
          continue;
        }
        if (g > 0.0) pg = g;
      } else {
        pg = g;
      }
      pg_max_new = std::max(pg_max_new, pg);
      pg_min_new = std::min(pg_min_new, pg);

      if (std::fabs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::min(std::max(old - g / qd[i], 0.0), upper[i]);
        const double step = (alpha[i] - old) * yi;
        if (step != 0.0) {
          for (std::size_t j = 0; j < d; ++j) w[j] += step * xi[j];
          b += step;
          alpha_sum += alpha[i] - old;
        }
      }
    }
    local.dual_objective.push_back(dual_value());

    if (active == 0) {
      pg_max_new = 0.0;
      pg_min_new = 0.0;
    }
    violation = std::max(std::fabs(pg_max_new), std::fabs(pg_min_new));
    if (violation < o.tolerance) {
      if (active == n) {
        converged = true;
        break;
      }
      // Re-check the full problem before declaring convergence.
      active = n;
      pg_max_old = std::numeric_limits<double>::infinity();
      pg_min_old = -std::numeric_limits<double>::infinity();
      continue;
    }
    pg_max_old = pg_max_new > 0.0 ? pg_max_new : std::numeric_limits<double>::infinity();
    pg_min_old = pg_min_new < 0.0 ? pg_min_new : -std::numeric_limits<double>::infinity();
  }

  const double dual = dual_value();
  LinearModel model{std::move(w), b, o.C};
  if (trace) {
    local.epochs = epoch;
    local.max_violation = violation;
    local.converged = converged;
    local.dual = dual;
    local.primal = primal_objective(model, x, y, o);
    *trace = std::move(local);
  }
  return model;
}

double primal_objective(const LinearModel& model, const DenseMatrix& x, std::span<const int> y,
                        const SvmOptions& options) {
  const auto upper = upper_bounds(y, options);
  double reg = model.bias * model.bias;
  for (double v : model.weights) reg += v * v;
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double margin = static_cast<double>(y[i]) * augmented_dot(model.weights, model.bias, x.row(i));
    loss += upper[i] * std::max(0.0, 1.0 - margin);
  }
  return 0.5 * reg + loss;
}

std::vector<double> decision_scores(const LinearModel& model, const DenseMatrix& x) {
  if (x.cols != model.weights.size())
    throw InvalidArgument("decision_scores: model has " + std::to_string(model.weights.size()) +
                          " weights, data has " + std::to_string(x.cols) + " columns");
  std::vector<double> s(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) s[i] = augmented_dot(model.weights, model.bias, x.row(i));
  return s;
}

std::vector<int> predict_signs(const LinearModel& model, const DenseMatrix& x) {
  const auto s = decision_scores(model, x);
  std::vector<int> out(s.size());
  std::transform(s.begin(), s.end(), out.begin(), [](double v) { return v >= 0.0 ? 1 : -1; });
  return out;
}

std::vector<double> default_c_grid() {
  std::vector<double> g;
  for (int e = -15; e <= 5; e += 2) g.push_back(std::ldexp(1.0, e));
  return g;
}

GridSearchResult grid_search_C(const DenseMatrix& x_train, std::span<const int> y_train,
                               const DenseMatrix& x_devel, std::span<const int> y_devel,
                               std::span<const double> grid, const SvmOptions& base, unsigned jobs) {
  if (grid.empty()) throw InvalidArgument("grid_search_C: empty grid");
  std::vector<int> truth(y_devel.size());
  std::transform(y_devel.begin(), y_devel.end(), truth.begin(), sign_to_class);

  struct Candidate {
    LinearModel model;
    EvalResult eval;
  };
  std::vector<Candidate> candidates(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t k) {
    SvmOptions o = base;
    o.C = grid[k];
    auto model = train_svm(x_train, y_train, o);
    auto signs = predict_signs(model, x_devel);
    std::vector<int> pred(signs.size());
    std::transform(signs.begin(), signs.end(), pred.begin(), sign_to_class);
    candidates[k] = {std::move(model), evaluate(truth, pred, 2)};
  });

  GridSearchResult result;
  std::size_t best = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    result.points.push_back({grid[k], candidates[k].eval.uar});
    const double u = candidates[k].eval.uar;
    const double bu = candidates[best].eval.uar;
    if (u > bu || (u == bu && grid[k] < grid[best])) best = k;
  }
  result.best_C = grid[best];
  result.model = std::move(candidates[best].model);
  result.devel_eval = std::move(candidates[best].eval);
  result.devel_uar = result.devel_eval.uar;
  return result;
}

}  // namespace turnlens
