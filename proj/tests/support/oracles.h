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

// Independent reference implementations used only by the test suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "turnlens/turntaking.h"

namespace turnlens::oracle {

/// Labels every millisecond cell of the timeline from first principles and
/// coalesces runs. Talkspurt bounds must be whole milliseconds.
inline std::vector<Segment> brute_force_segments(const std::vector<Talkspurt>& customer,
                                                 const std::vector<Talkspurt>& agent) {
  auto ms = [](double s) { return static_cast<std::int64_t>(std::llround(s * 1000.0)); };
  std::int64_t lo = std::numeric_limits<std::int64_t>::max(), hi = std::numeric_limits<std::int64_t>::min();
  for (const auto* ch : {&customer, &agent})
    for (const auto& t : *ch) {
      lo = std::min(lo, ms(t.start));
      hi = std::max(hi, ms(t.end));
    }
  if (lo >= hi) return {};
  const auto cells = static_cast<std::size_t>(hi - lo);

  // Which talkspurt (if any) covers each cell, per channel.
  std::vector<const Talkspurt*> cov_c(cells, nullptr), cov_a(cells, nullptr);
  for (const auto* ch : {&customer, &agent})
    for (const auto& t : *ch)
      for (std::int64_t k = ms(t.start); k < ms(t.end); ++k)
        (ch == &customer ? cov_c : cov_a)[static_cast<std::size_t>(k - lo)] = &t;

  // Floor holder before a cell: the last talkspurt to end at or before it;
  // ties -> earlier start, then customer.
  auto better_prev = [&](const Talkspurt* cand, const Talkspurt* cur) {
    if (!cur || ms(cand->end) > ms(cur->end)) return true;
    if (ms(cand->end) < ms(cur->end)) return false;
    if (ms(cand->start) != ms(cur->start)) return ms(cand->start) < ms(cur->start);
    return cand->channel == Channel::kCustomer;
  };
  std::vector<std::vector<const Talkspurt*>> ends_at(cells + 1), starts_at(cells + 1);
  for (const auto* ch : {&customer, &agent})
    for (const auto& t : *ch) {
      ends_at[static_cast<std::size_t>(ms(t.end) - lo)].push_back(&t);
      starts_at[static_cast<std::size_t>(ms(t.start) - lo)].push_back(&t);
    }
  std::vector<const Talkspurt*> prev(cells, nullptr);
  {
    const Talkspurt* best = nullptr;
    for (std::size_t k = 0; k < cells; ++k) {
      for (const Talkspurt* t : ends_at[k])
        if (better_prev(t, best)) best = t;
      prev[k] = best;
    }
  }
  // Next starter after a cell: the first talkspurt to start after it; ties -> customer.
  std::vector<const Talkspurt*> next(cells, nullptr);
  {
    const Talkspurt* best = nullptr;
    for (std::size_t k = cells; k-- > 0;) {
      const Talkspurt* here = nullptr;
      for (const Talkspurt* t : starts_at[k + 1])
        if (!here || t->channel == Channel::kCustomer) here = t;
      if (here) best = here;
      next[k] = best;
    }
  }

  std::vector<Segment> out;
  for (std::size_t k = 0; k < cells; ++k) {
    const std::int64_t cell = lo + static_cast<std::int64_t>(k);
    const Talkspurt* c = cov_c[k];
    const Talkspurt* a = cov_a[k];
    SegmentType type;
    if (c && a) {
      type = ms(c->start) > ms(a->start) ? SegmentType::S4 : SegmentType::S3;
    } else if (c) {
      type = SegmentType::S1;
    } else if (a) {
      type = SegmentType::S2;
    } else {
      if (!prev[k] || !next[k]) continue;
      const bool from_agent = prev[k]->channel == Channel::kAgent;
      const bool to_agent = next[k]->channel == Channel::kAgent;
      if (from_agent && !to_agent) type = SegmentType::S5;
      else if (!from_agent && to_agent) type = SegmentType::S6;
      else if (!from_agent) type = SegmentType::S7;
      else type = SegmentType::S8;
    }
    const double t0 = static_cast<double>(cell) / 1000.0;
    const double t1 = static_cast<double>(cell + 1) / 1000.0;
    if (!out.empty() && out.back().type == type && std::llround(out.back().end * 1000.0) == cell)
      out.back().end = t1;
    else
      out.push_back({type, t0, t1});
  }
  return out;
}

/// Repeatedly merges any two intervals closer than merge_gap until stable.
inline std::vector<std::pair<double, double>> pairwise_merge(std::vector<std::pair<double, double>> xs,
                                                             double merge_gap) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < xs.size() && !changed; ++i)
      for (std::size_t j = 0; j < xs.size() && !changed; ++j) {
        if (i == j) continue;
        if (xs[i].second <= xs[j].first && xs[j].first - xs[i].second < merge_gap - 1e-9) {
          xs[i].second = std::max(xs[i].second, xs[j].second);
          xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(j));
          changed = true;
        }
      }
  }
  std::sort(xs.begin(), xs.end());
  return xs;
}

struct DirectMoments {
  double mean, sd, skew, kurt;
};

/// Textbook population moments in long double, computed with pow().
inline DirectMoments direct_moments(const std::vector<double>& xs) {
  const long double n = static_cast<long double>(xs.size());
  long double mean = 0;
  for (double x : xs) mean += x;
  mean /= n;
  long double m2 = 0, m3 = 0, m4 = 0;
  for (double x : xs) {
    m2 += std::pow(x - mean, 2.0L);
    m3 += std::pow(x - mean, 3.0L);
    m4 += std::pow(x - mean, 4.0L);
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  if (xs.size() < 2 || m2 == 0) return {static_cast<double>(mean), 0, 0, 0};
  return {static_cast<double>(mean), static_cast<double>(std::sqrt(m2)),
          static_cast<double>(m3 / std::pow(m2, 1.5L)), static_cast<double>(m4 / (m2 * m2) - 3)};
}

/// Exact least-squares nondecreasing fit by exhaustive search over all
/// partitions into contiguous blocks (the optimum is constant on blocks
/// equal to block means). Feasible for n <= ~16.
inline std::vector<double> exhaustive_isotonic(const std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<double> best;
  double best_sse = std::numeric_limits<double>::infinity();
  const std::uint32_t masks = n == 0 ? 1u : (1u << (n - 1));
  for (std::uint32_t mask = 0; mask < masks; ++mask) {
    std::vector<double> fit(n);
    std::size_t start = 0;
    double prev_mean = -std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (std::size_t i = 0; i < n && monotone; ++i) {
      const bool cut_after = i + 1 == n || ((mask >> i) & 1u);
      if (!cut_after) continue;
      double s = 0;
      for (std::size_t k = start; k <= i; ++k) s += y[k];
      const double mean = s / static_cast<double>(i + 1 - start);
      if (mean < prev_mean - 1e-15) monotone = false;
      for (std::size_t k = start; k <= i; ++k) fit[k] = mean;
      prev_mean = mean;
      start = i + 1;
    }
    if (!monotone) continue;
    double sse = 0;
    for (std::size_t k = 0; k < n; ++k) sse += (y[k] - fit[k]) * (y[k] - fit[k]);
    if (sse < best_sse - 1e-15) {
      best_sse = sse;
      best = fit;
    }
  }
  return best;
}

/// Largest training UAR any linear rule sign(w.x + b) reaches on 2-D points,
/// scanned over a dense grid of directions and offsets.
inline double best_linear_uar_2d(const std::vector<std::pair<double, double>>& pts, const std::vector<int>& cls) {
  double best = 0.0;
  const double pi = std::acos(-1.0);
  for (int a = 0; a < 720; ++a) {
    const double th = pi * a / 360.0;
    const double w1 = std::cos(th), w2 = std::sin(th);
    for (int bi = -400; bi <= 400; ++bi) {
      const double b = bi / 100.0;
      std::size_t hit[2] = {0, 0}, tot[2] = {0, 0};
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const int pred = w1 * pts[i].first + w2 * pts[i].second + b >= 0 ? 1 : 0;
        ++tot[cls[i]];
        hit[cls[i]] += pred == cls[i];
      }
      best = std::max(best, 0.5 * (double(hit[0]) / tot[0] + double(hit[1]) / tot[1]));
    }
  }
  return best;
}

}  // namespace turnlens::oracle
