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

#include <numbers>

// SI constants (CODATA 2018 exact/recommended values). The simulation core
// works in nanoseconds and rad/ns; conversions live next to each model.
namespace g4vmem::si {

inline constexpr double pi = std::numbers::pi;
inline constexpr double c = 299'792'458.0;             // m/s
inline constexpr double hbar = 1.054'571'817e-34;      // J s
inline constexpr double h = 6.626'070'15e-34;          // J s
inline constexpr double eps0 = 8.854'187'8128e-12;     // F/m
inline constexpr double mu0 = 1.256'637'062'12e-6;     // N/A^2
inline constexpr double e = 1.602'176'634e-19;         // C
inline constexpr double kB = 1.380'649e-23;            // J/K
inline constexpr double muB = 9.274'010'0783e-24;      // J/T
inline constexpr double fine_structure = 1.0 / 137.0;  // value used by the decay-rate model

/// rad/ns per GHz of ordinary frequency.
inline constexpr double rad_per_ns_per_GHz = 2.0 * pi;

}  // namespace g4vmem::si
