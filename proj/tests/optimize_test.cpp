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

#include <gtest/gtest.h>

using namespace g4vmem::optimize;

namespace {

double quadratic(const std::vector<double>& x) {
  const double a = x[0] - 0.37, b = x[1] + 1.2, c = x[2] - 4.1;
  return 1.0 - a * a - 3.0 * b * b - 0.5 * c * c;
}

// Two bumps; the narrower one is higher.
double bumps(const std::vector<double>& x) {
  const double d1 = (x[0] - 0.2) * (x[0] - 0.2) + (x[1] - 0.8) * (x[1] - 0.8);
  const double d2 = (x[0] - 0.75) * (x[0] - 0.75) + (x[1] - 0.3) * (x[1] - 0.3);
  return std::max(0.8 * std::exp(-d1 / 0.1), std::exp(-d2 / 0.01));
}

}  // namespace

TEST(Maximize, RecoversQuadraticOptimum) {
  const Box box{{-1.0, -3.0, 0.0}, {2.0, 1.0, 10.0}};
  const auto r = maximize(quadratic, box, Options{});
  EXPECT_NEAR(r.value, 1.0, 1e-9);
  const double tol = 1e-4 * box.diagonal();
  EXPECT_NEAR(r.x[0], 0.37, tol);
  EXPECT_NEAR(r.x[1], -1.2, tol);
  EXPECT_NEAR(r.x[2], 4.1, tol);
  EXPECT_LE(r.evaluations, 2000);
}

TEST(Maximize, FindsGlobalBump) {
  const Box box{{0.0, 0.0}, {1.0, 1.0}};
  const auto r = maximize(bumps, box, Options{}, std::vector<double>{0.2, 0.8});
  EXPECT_NEAR(r.x[0], 0.75, 1e-4);
  EXPECT_NEAR(r.x[1], 0.3, 1e-4);
}

TEST(Maximize, StartEvaluatedFirstAndNeverWorse) {
  const Box box{{0.0, 0.0}, {1.0, 1.0}};
  const auto r = maximize(bumps, box, Options{}, std::vector<double>{0.2, 0.8});
  ASSERT_FALSE(r.history.empty());
  EXPECT_DOUBLE_EQ(r.history.front(), bumps({0.2, 0.8}));
  EXPECT_GE(r.value, r.history.front() - 1e-9);
}

TEST(Maximize, MonotoneInBudgetAndDeterministic) {
  const Box box{{0.0, 0.0}, {1.0, 1.0}};
  double prev = -1.0;
  for (long budget : {10L, 50L, 200L, 1000L, 1500L, 2000L, 3000L}) {
    Options opt;
    opt.budget = budget;
    const auto a = maximize(bumps, box, opt);
    const auto b = maximize(bumps, box, opt);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.x, b.x);
    EXPECT_GE(a.value, prev);
    EXPECT_LE(a.evaluations, budget);
    prev = a.value;
  }
}

TEST(Maximize, HistoryNonDecreasing) {
  const auto r = maximize(bumps, Box{{0.0, 0.0}, {1.0, 1.0}}, Options{});
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_GE(r.history[i], r.history[i - 1]);
}

TEST(Maximize, RejectsBadBox) {
  EXPECT_THROW(maximize(bumps, Box{{0.0, 1.0}, {1.0, 1.0}}, Options{}), std::invalid_argument);
  EXPECT_THROW(maximize(bumps, Box{{0.0}, {1.0, 1.0}}, Options{}), std::invalid_argument);
  EXPECT_THROW(maximize(bumps, Box{{0.0, 0.0}, {INFINITY, 1.0}}, Options{}), std::invalid_argument);
  Options opt;
  opt.budget = 0;
  EXPECT_THROW(maximize(bumps, Box{{0.0, 0.0}, {1.0, 1.0}}, opt), std::invalid_argument);
}

TEST(Maximize, ObjectiveErrorsPropagate) {
  const auto bad = [](const std::vector<double>&) -> double { throw std::runtime_error("boom"); };
  EXPECT_THROW(maximize(bad, Box{{0.0}, {1.0}}, Options{}), std::runtime_error);
}
