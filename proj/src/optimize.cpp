// Copyright 2026 The g4vmem Authors
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

#include "g4vmem/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace g4vmem::optimize {

void Box::validate() const {
  if (lo.size() != hi.size() || lo.empty()) throw std::invalid_argument("optimizer box: bad dimension");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
      throw std::invalid_argument("optimizer box: bounds must be finite");
    if (!(hi[i] > lo[i])) throw std::invalid_argument("optimizer box: degenerate interval");
  }
}

double Box::diagonal() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) acc += (hi[i] - lo[i]) * (hi[i] - lo[i]);
  return std::sqrt(acc);
}

namespace {

struct BudgetExhausted {};

// Tracks evaluations in unit-box coordinates and the running best.
class Evaluator {
 public:
  Evaluator(const Objective& f, const Box& box, Result& res) : f_(f), box_(box), res_(res) {}

  double operator()(const std::vector<double>& u, long limit) {
    if (res_.evaluations >= limit) throw BudgetExhausted{};
    std::vector<double> x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      x[i] = box_.lo[i] + std::clamp(u[i], 0.0, 1.0) * (box_.hi[i] - box_.lo[i]);
    double v = f_(x);
    if (std::isnan(v)) v = -std::numeric_limits<double>::infinity();
    ++res_.evaluations;
    if (res_.history.empty() || v > res_.value) {
      res_.value = v;
      res_.x = x;
      best_unit_ = u;
    }
    res_.history.push_back(res_.value);
    return v;
  }

  const std::vector<double>& best_unit() const { return best_unit_; }

 private:
  const Objective& f_;
  const Box& box_;
  Result& res_;
  std::vector<double> best_unit_;
};

struct Rect {
  std::vector<double> center;
  std::vector<int> level;
  double value;  // objective (maximized)

  double size() const {
    double acc = 0.0;
    for (int k : level) acc += std::pow(3.0, -2.0 * k);
    return 0.5 * std::sqrt(acc);
  }
};

// Indices of potentially optimal rectangles: lower-right convex hull of
// (size, -value) restricted to the best rectangle of each size class.
std::vector<std::size_t> potentially_optimal(const std::vector<Rect>& rects) {
  std::vector<std::size_t> idx(rects.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> sz(rects.size());
  for (std::size_t i = 0; i < rects.size(); ++i) sz[i] = rects[i].size();
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (std::abs(sz[a] - sz[b]) > 1e-12 * std::max(sz[a], sz[b])) return sz[a] < sz[b];
    return rects[a].value > rects[b].value;
  });
  // best per size class
  std::vector<std::size_t> best;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (best.empty() || std::abs(sz[idx[i]] - sz[best.back()]) > 1e-12 * sz[idx[i]])
      best.push_back(idx[i]);
  }
  // start at the globally best class (largest size among ties)
  std::size_t start = 0;
  for (std::size_t i = 0; i < best.size(); ++i) {
    if (rects[best[i]].value >= rects[best[start]].value) start = i;
  }
  std::vector<std::size_t> hull;
  for (std::size_t i = start; i < best.size(); ++i) {
    const std::size_t p = best[i];
    const double x = sz[p], y = -rects[p].value;
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      const double cross = (sz[b] - sz[a]) * (y - (-rects[a].value)) -
                           (-rects[b].value - (-rects[a].value)) * (x - sz[a]);
      if (cross <= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  return hull;
}

void direct_phase(Evaluator& eval, std::size_t dim, long limit) {
  std::vector<Rect> rects;
  Rect root{std::vector<double>(dim, 0.5), std::vector<int>(dim, 0), 0.0};
  root.value = eval(root.center, limit);
  rects.push_back(root);

  for (;;) {
    const auto selected = potentially_optimal(rects);
    for (std::size_t r : selected) {
      Rect parent = rects[r];
      const int kmin = *std::min_element(parent.level.begin(), parent.level.end());
      const double delta = std::pow(3.0, -(kmin + 1));
      struct Probe {
        std::size_t axis;
        Rect plus, minus;
      };
      std::vector<Probe> probes;
      for (std::size_t i = 0; i < dim; ++i) {
        if (parent.level[i] != kmin) continue;
        Probe p{i, parent, parent};
        p.plus.center[i] += delta;
        p.minus.center[i] -= delta;
        p.plus.value = eval(p.plus.center, limit);
        p.minus.value = eval(p.minus.center, limit);
        probes.push_back(std::move(p));
      }
      std::stable_sort(probes.begin(), probes.end(), [](const Probe& a, const Probe& b) {
        return std::max(a.plus.value, a.minus.value) > std::max(b.plus.value, b.minus.value);
      });
      std::vector<int> level = parent.level;
      for (auto& p : probes) {
        ++level[p.axis];
        p.plus.level = level;
        p.minus.level = level;
        rects.push_back(p.plus);
        rects.push_back(p.minus);
      }
      rects[r].level = level;
    }
  }
}

void nelder_mead(Evaluator& eval, std::vector<double> x0, const Options& opt, long limit) {
  const std::size_t n = x0.size();
  auto clamp01 = [](std::vector<double> v) {
    for (auto& c : v) c = std::clamp(c, 0.0, 1.0);
    return v;
  };
  std::vector<std::vector<double>> simplex{x0};
  std::vector<double> fv{eval(x0, limit)};
  for (std::size_t i = 0; i < n; ++i) {
    auto v = x0;
    v[i] += (v[i] + opt.polish_step <= 1.0) ? opt.polish_step : -opt.polish_step;
    simplex.push_back(clamp01(v));
    fv.push_back(eval(simplex.back(), limit));
  }
  for (;;) {
    std::vector<std::size_t> ord(n + 1);
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return fv[a] > fv[b]; });
    const std::size_t best = ord.front(), worst = ord.back(), second = ord[n - 1];
    double spread = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t d = 0; d < n; ++d) spread = std::max(spread, std::abs(simplex[i][d] - simplex[best][d]));
    if (std::abs(fv[best] - fv[worst]) <= opt.polish_ftol && spread < 1e-9) return;
    if (spread < 1e-12) return;

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d] / n;
    }
    auto along = [&](double t) {
      std::vector<double> v(n);
      for (std::size_t d = 0; d < n; ++d) v[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
      return clamp01(v);
    };
    const auto xr = along(-1.0);
    const double fr = eval(xr, limit);
    if (fr > fv[best]) {
      const auto xe = along(-2.0);
      const double fe = eval(xe, limit);
      if (fe > fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr > fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr > fv[worst];
      const auto xc = along(outside ? -0.5 : 0.5);
      const double fc = eval(xc, limit);
      if (fc > std::max(fr, fv[worst])) {
        simplex[worst] = xc;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < n; ++d)
            simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
          fv[i] = eval(simplex[i], limit);
        }
      }
    }
  }
}

}  // namespace

Result maximize(const Objective& f, const Box& box, const Options& opt,
                const std::optional<std::vector<double>>& start) {
  box.validate();
  if (opt.budget <= 0) throw std::invalid_argument("optimizer budget must be positive");
  Result res;
  Evaluator eval(f, box, res);
  const std::size_t dim = box.dim();
  const long global_limit = std::min(opt.budget, opt.global_evals);

  try {
    if (start) {
      if (start->size() != dim) throw std::invalid_argument("optimizer start point has wrong dimension");
      std::vector<double> u(dim);
      for (std::size_t i = 0; i < dim; ++i)
        u[i] = std::clamp(((*start)[i] - box.lo[i]) / (box.hi[i] - box.lo[i]), 0.0, 1.0);
      eval(u, global_limit);
    }
    direct_phase(eval, dim, global_limit);
  } catch (const BudgetExhausted&) {
  }
  try {
    nelder_mead(eval, eval.best_unit(), opt, opt.budget);
  } catch (const BudgetExhausted&) {
  }
  return res;
}

}  // namespace g4vmem::optimize
