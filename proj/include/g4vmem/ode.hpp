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

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>

#include "g4vmem/qcore.hpp"

namespace g4vmem::ode {

struct Options {
  double rtol = 1e-8;
  double atol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 picks a step from the derivative scale
  long max_steps = 50'000'000;
};

struct Stats {
  long accepted = 0;
  long rejected = 0;
  long rhs_calls = 0;
};

using Rhs = std::function<void(double t, const CVector& y, CVector& dydt)>;

/// Called once per accepted step with the dense interpolant of that step.
/// `eval(theta, out)` evaluates y(t0 + theta * h) for theta in [0, 1].
struct StepView {
  double t0;
  double h;
  const CVector& y0;
  const CVector& y1;
  std::function<void(double theta, CVector& out)> eval;
};
using StepObserver = std::function<void(const StepView&)>;

/// Adaptive Dormand-Prince 5(4) with Hairer's 4th-order continuous extension.
/// Integrates y' = f(t, y) from t0 to t1 in place. Throws NumericalError when
/// the step size underflows or the step budget is exhausted.
inline Stats integrate_dopri5(const Rhs& f, CVector& y, double t0, double t1, const Options& opt,
                              const StepObserver& observer = {}) {
  // Butcher tableau
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                   a76 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;
  constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                   d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                   d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  Stats stats;
  const Eigen::Index n = y.size();
  CVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
  CVector rc2(n), rc3(n), rc4(n), rc5(n);

  auto err_norm = [&](const CVector& y0, const CVector& y1, const CVector& e) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
      const double r = std::abs(e(i)) / sc;
      acc += r * r;
    }
    return std::sqrt(acc / std::max<Eigen::Index>(n, 1));
  };

  f(t0, y, k1);
  ++stats.rhs_calls;
  const double span = t1 - t0;
  if (span <= 0.0) return stats;

  double h = opt.initial_step;
  if (h <= 0.0) {
    const double d0 = err_norm(y, y, y), dd = err_norm(y, y, k1);
    h = (d0 < 1e-5 || dd < 1e-5) ? 1e-6 * span : 0.01 * d0 / dd;
    h = std::min(h, 0.01 * span);
  }
  h = std::min(h, opt.max_step);

  double t = t0;
  double err_prev = 1e-4;
  bool last_rejected = false;
  while (t < t1) {
    if (stats.accepted + stats.rejected >= opt.max_steps)
      throw NumericalError("ODE step budget exhausted at t = " + std::to_string(t));
    if (t + h > t1) h = t1 - t;
    if (h < 1e-14 * std::max(std::abs(t), std::abs(span)))
      throw NumericalError("ODE step size underflow at t = " + std::to_string(t));

    ytmp = y + h * a21 * k1;
    f(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, ytmp, k6);
    ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(t + h, ynew, k7);
    stats.rhs_calls += 6;
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = err_norm(y, ynew, err);

    if (!std::isfinite(en)) {
      ++stats.rejected;
      h *= 0.1;
      last_rejected = true;
      continue;
    }

    if (en <= 1.0) {
      ++stats.accepted;
      if (observer) {
        rc2 = ynew - y;
        rc3 = h * k1 - rc2;
        rc4 = rc2 - h * k7 - rc3;
        rc5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        const CVector& y0ref = y;
        StepView view{t, h, y0ref, ynew, [&](double th, CVector& out) {
                        const double th1 = 1.0 - th;
                        out = y0ref + th * (rc2 + th1 * (rc3 + th * (rc4 + th1 * rc5)));
                      }};
        observer(view);
      }
      t += h;
      y = ynew;
      k1 = k7;
      // PI step control
      double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
      h = std::min(h * fac, opt.max_step);
      err_prev = std::max(en, 1e-4);
      last_rejected = false;
    } else {
      ++stats.rejected;
      h *= std::max(0.2, 0.9 * std::pow(en, -1.0 / 5));
      last_rejected = true;
    }
  }
  return stats;
}

}  // namespace g4vmem::ode
