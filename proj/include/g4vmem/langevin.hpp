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

#include <vector>

#include "g4vmem/cavity.hpp"
#include "g4vmem/ode.hpp"
#include "g4vmem/photon.hpp"

// Mean-field Heisenberg-Langevin dynamics of the driven cavity and the
// four-level emitter {1, 2, A, B}, in the frame rotating at the cavity
// frequency. Operator products are replaced by products of expectations.
//
// Expectations follow the usual e^{-i w t} convention. Output modes are
// returned conjugated, i.e. in the e^{+i w t} convention of the reflection
// coefficients, so that time-domain integrals line up with
// cavity::spectral_integrals.
namespace g4vmem::langevin {

struct LangevinParams {
  cavity::CavityModel cav;
  photon::PhotonSourceSpec drive;  // omega0 absolute, rad/ns
  double e0 = 1e-3;
  double duration_factor = 20.0;  // t_final = duration_factor / gamma
  double rtol = 1e-8;
  double atol = 1e-10;
  /// Trapezoid grid resolution: samples per period of the fastest frequency.
  int samples_per_period = 256;
  /// Upper bound on excited-state population checked after the run.
  double weak_drive_limit = 1e-4;

  /// epsilon_A - omega_c
  double delta() const { return cav.levels.omega_1A - cav.omega_c; }
  /// omega_c - omega_2B
  double delta_B() const { return cav.omega_c - cav.levels.omega_2B; }
  double t_final() const { return duration_factor / drive.gamma; }
  void validate() const;
};

enum Component { kA = 0, kS1A, kS2A, kS1B, kS2B, kP11, kP22, kPAA, kPBB, kComponents };

struct LangevinTrajectory {
  std::vector<double> t;          // uniform grid on [0, t_final]
  std::vector<CVector> y;         // expectations, indexed by Component
  std::vector<cplx> a_in;         // drive in the e^{-i w t} convention
  double max_conservation_error = 0.0;
  double max_excited_population = 0.0;
  ode::Stats stats;
};

/// Integrates from vacuum with the spin in |1> or |2>. Throws NumericalError
/// on solver failure or when the excited population exceeds the weak-drive
/// limit.
LangevinTrajectory propagate_langevin(const LangevinParams& p, cavity::Spin initial_spin);

/// D(t) = conj(sqrt(2 kappa) a(t) - a_in(t)).
std::vector<cplx> output_mode(const LangevinTrajectory& traj, const LangevinParams& p);
/// The drive on the same grid, conjugated like output_mode.
std::vector<cplx> input_mode(const LangevinTrajectory& traj);

/// N * trapezoid of |D1|^2, D1 D2*, |D2|^2 with N = gamma / e0^2.
cavity::ReflectionIntegrals time_integrals(const std::vector<double>& t,
                                           const std::vector<cplx>& d1,
                                           const std::vector<cplx>& d2, double gamma, double e0);

/// Both spin runs followed by time_integrals.
cavity::ReflectionIntegrals langevin_integrals(const LangevinParams& p);

}  // namespace g4vmem::langevin
