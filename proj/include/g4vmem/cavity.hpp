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

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "g4vmem/optimize.hpp"
#include "g4vmem/photon.hpp"
#include "g4vmem/qcore.hpp"

// Spin-dependent reflection off a single-sided cavity and the spin-photon
// CPHASE figure of merit built from it.
//
// Units: angular frequencies and rates in rad/ns. Absolute optical
// frequencies are only needed for the coupling and decay-rate formulas;
// everything else uses detunings.
namespace g4vmem::cavity {

enum class Spin { One = 1, Two = 2 };

struct LevelStructure {
  double omega_1A = 0.0;  // optical transition |1> <-> |A>
  double omega_2B = 0.0;  // optical transition |2> <-> |B>
  double omega_s = 0.0;   // ground-state spin splitting
  double gamma_1A = 0.0;
  double gamma_2B = 0.0;
  double gamma_2A = 0.0;
  double gamma_1B = 0.0;
  // Projected dipole matrix elements <k|eps.d|l>, C m.
  double dipole_1A = 0.0;
  double dipole_2B = 0.0;
  double dipole_2A = 0.0;
  double dipole_1B = 0.0;

  double delta_omega_s() const { return omega_2B - omega_1A; }
  /// Total decay rate out of |A> (resp. |B>).
  double gamma_A() const { return gamma_1A + gamma_2A; }
  double gamma_B() const { return gamma_1B + gamma_2B; }

  void validate() const;
  /// Soft checks of the decay hierarchy; returns human-readable warnings.
  std::vector<std::string> lint() const;
};

/// SnV-like defaults: optical line at 484.1 THz, 4.5 ns lifetime, Debye-Waller
/// factor applied to the coherent (zero-phonon) dipole, and cross-coupled
/// branches at `cross_fraction` of the direct ones. Frequencies in rad/ns.
struct SnvParams {
  double omega_1A = 2.0 * std::numbers::pi * 484100.0;
  double lifetime = 4.5;
  double debye_waller = 0.6;
  double cross_fraction = 0.01;
  double omega_s = 0.0;
  double delta_omega_s = 0.0;
  double n = 2.417;
};
LevelStructure snv_levels(const SnvParams& p);

struct Geometry {
  double V_eff = 1.8;
  double n = 2.417;
  double eps_r = 5.7;
};

struct CavityModel {
  double omega_c = 0.0;
  double kappa = 0.0;  // HWHM loss rate
  Geometry geometry;
  cplx g_1A{}, g_2B{}, g_2A{}, g_1B{};
  LevelStructure levels;

  void validate() const;
  std::vector<std::string> lint() const;
};

struct ReflectionIntegrals {
  double I1 = 0.0;
  cplx I2{};
  double I3 = 0.0;

  /// Range and Cauchy-Schwarz checks at tolerance `tol`.
  bool consistent(double tol = 1e-9) const;
};

/// g = i sqrt(w_c / (2 hbar eps0 eps_r V)) d with V = V_eff lambda^3 / (2 n^3).
/// omega_c in rad/ns, dipole in C m; returns rad/ns.
cplx coupling_strength(double omega_c, double dipole, const Geometry& geo);

/// Spontaneous decay rate 4 alpha w^3 n |d|^2 / (3 c^2 e^2), in 1/ns.
double natural_decay_rate(double omega, double dipole, double n);
/// Inverse of natural_decay_rate.
double dipole_from_rate(double omega, double gamma, double n);

/// Builds a cavity with couplings recomputed from the level dipoles.
CavityModel make_cavity(const LevelStructure& levels, double omega_c, double kappa,
                        const Geometry& geo);

cplx reflection_coefficient(double omega, const CavityModel& cav, Spin spin);

/// 2 |g|^2 / (kappa gamma)
double cooperativity(cplx g, double kappa, double gamma);
/// (C_1A, C_2A, C_1B, C_2B)
std::array<double, 4> cooperativities(const CavityModel& cav);

using Reflection = std::function<cplx(double omega)>;

/// Integrals of S |R1|^2, S R1 R2*, S |R2|^2 over the whole real line, with S
/// the normalized Lorentzian intensity of the photon. The tails beyond the
/// resonant features are mapped onto finite intervals by
/// w = w0 + (gamma/2) tan(theta), so nothing is truncated.
ReflectionIntegrals spectral_integrals(const photon::SpectralAmplitude& s, const Reflection& r1,
                                       const Reflection& r2, double tol = 1e-10);
ReflectionIntegrals spectral_integrals(const photon::SpectralAmplitude& s, const CavityModel& cav,
                                       double tol = 1e-10);

struct MeasuredStates {
  Mat2 plus;
  Mat2 minus;
};

/// Sub-normalized spin states conditioned on the photon X outcomes (+/-).
MeasuredStates measured_spin_states(cplx alpha, cplx beta, const ReflectionIntegrals& I);

/// R_y rho_+ R_y^dagger + sigma_z R_y rho_- R_y^dagger sigma_z with R_y = R_y(pi/2).
Mat2 recovered_spin_state(const Mat2& rho_plus, const Mat2& rho_minus);

struct EntanglementMetrics {
  double fidelity = 0.0;     // F_sp
  double success = 0.0;      // eta_sp
};
EntanglementMetrics entanglement_metrics(const Mat2& rho_total);

/// F_sp for alpha = beta = 1/sqrt 2 given the integrals.
EntanglementMetrics spin_photon_metrics(const ReflectionIntegrals& I);

/// Search box over (omega0, omega_c, kappa); frequencies in rad/ns.
struct CavityBounds {
  std::array<double, 2> omega0;
  std::array<double, 2> omega_c;
  std::array<double, 2> kappa;
};

struct OptimizedCavity {
  CavityModel cavity;
  double omega0 = 0.0;
  double fidelity = 0.0;
  double start_fidelity = 0.0;
  long evaluations = 0;
  std::vector<double> history;
};

/// Objective over (omega0, omega_c, kappa); default is F_sp of the spectral
/// integrals. Tests may inject a synthetic landscape.
using CavityObjective = std::function<double(double omega0, double omega_c, double kappa)>;

CavityObjective fidelity_objective(const photon::PhotonSourceSpec& spec,
                                   const LevelStructure& levels, const Geometry& geo);

/// Maximizes the objective. The heuristic start (omega0 = omega_c = omega_1A,
/// kappa = photon bandwidth), clamped into the box, is evaluated first.
OptimizedCavity optimize_cavity(const CavityBounds& bounds, const photon::PhotonSourceSpec& spec,
                                const LevelStructure& levels, const Geometry& geo,
                                const optimize::Options& opt,
                                const CavityObjective& objective = {});

}  // namespace g4vmem::cavity
