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

#include <functional>
#include <optional>
#include <vector>

// Deterministic bounded global maximization: DIRECT (dividing rectangles)
// followed by a Nelder-Mead polish around the incumbent.
namespace g4vmem::optimize {

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const { return lo.size(); }
  /// Throws std::invalid_argument on mismatched, non-finite or degenerate bounds.
  void validate() const;
  double diagonal() const;
};

struct Options {
  long budget = 2000;       // total objective evaluations
  long global_evals = 1200; // DIRECT share; the rest goes to the polish
  double polish_step = 0.05; // initial simplex edge in unit-box coordinates
  double polish_ftol = 1e-13;
};

struct Result {
  std::vector<double> x;
  double value = 0.0;
  long evaluations = 0;
  /// Best value after each evaluation (non-decreasing).
  std::vector<double> history;
};

using Objective = std::function<double(const std::vector<double>&)>;

/// Maximizes `f` over `box`. The evaluation sequence does not depend on
/// `budget`, so a larger budget never reports a worse optimum. A supplied
/// start point is evaluated first.
Result maximize(const Objective& f, const Box& box, const Options& opt,
                const std::optional<std::vector<double>>& start = std::nullopt);

}  // namespace g4vmem::optimize
