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
#include <numbers>
#include <string>
#include <vector>

#include "g4vmem/qcore.hpp"

// Spin pi/2 rotations: a Lindblad propagator and the rotation models built
// on it. Times in ns, frequencies and rates in rad/ns. Qubit levels |1>, |2>
// are the first two basis states of every model.
namespace g4vmem::control {

struct Dissipator {
  double rate = 0.0;
  CMatrix op;
};

struct LindbladSpec {
  int dim = 2;
  std::function<CMatrix(double t)> hamiltonian;
  std::vector<Dissipator> dissipators;
  double t_final = 0.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  /// When positive, H(t) has this period and the one-period propagator is
  /// computed once and reused (stroboscopic propagation).
  double period = 0.0;

  void validate() const;
};

/// Linear propagation of arbitrary (not necessarily Hermitian) matrices.
std::vector<CMatrix> lindblad_propagate(const LindbladSpec& spec, const std::vector<CMatrix>& initial);

/// Density-state propagation; checks Hermiticity drift and trace
/// preservation, then symmetrizes.
qcore::DensityState lindblad_propagate(const LindbladSpec& spec, const qcore::DensityState& rho0);

/// Column-stacked superoperator of the evolution over [0, t].
CMatrix propagator(const LindbladSpec& spec, double t);

/// 1-norm distance between rho and its restriction to the qubit block.
double approximation_error(const CMatrix& rho_full);

/// D(X) for an arbitrary 2x2 X by linearity over the basis images.
Mat2 apply_images(const qcore::ChannelImages& images, const Mat2& x);
/// second after first.
qcore::ChannelImages compose(const qcore::ChannelImages& first, const qcore::ChannelImages& second);

enum class Model { Ideal, Optical, Microwave, Phenomenological };
std::string to_string(Model m);
Model model_from_string(const std::string& s);

struct RotationChannel {
  qcore::ChannelImages images;
  qcore::KrausSet kraus;
  double approx_error = 0.0;
  Model model = Model::Ideal;
  double gate_time = 0.0;  // ns
  double omega_s = 0.0;    // qubit splitting, rad/ns (microwave only)
  /// Smallest Choi eigenvalue relative to the largest before clamping.
  double cp_defect = 0.0;
  /// Full-space final state of the |1><1| propagation (empty for ideal models).
  CMatrix rho_one_full;

  /// D(|1><1|), the Lambda^{(mk)} coefficients.
  const Mat2& lambda() const { return images.at(0, 0); }
};

/// Builds the channel from images: enforces D(|2><1|) = D(|1><2|)^dagger,
/// records the CP defect and extracts Kraus operators.
RotationChannel make_channel(qcore::ChannelImages images, Model model, double tol_eig = 1e-6);

RotationChannel ideal_pi2();
/// Ideal rotation followed by depolarization with fidelity f_gate.
RotationChannel phenomenological_pi2(double f_gate);

struct MicrowaveConfig {
  double B_dc = 3.0;  // T
  double B_ac = 1e-3;  // T
  double theta_dc = 0.0;
  double theta_ac = std::numbers::pi / 2;
  double phi_dc = 0.0;                      // fixed
  double phi_ac = -std::numbers::pi / 2;    // fixed
  double E_x = 6.3e-3;
  double eps_xy = 2.5e-3;
  double temperature = 0.1;  // K

  // Ground-manifold model constants.
  double spin_orbit_GHz = 815.0;
  double strain_susceptibility_GHz = 9.2e3;  // GHz per unit strain
  double orbital_quenching = 0.153;
  double g_spin = 2.0;
  /// Zero-temperature orbital relaxation rate between the branches, rad/ns.
  double phonon_rate = 2.0;
  /// Multiplies every phonon rate; 0 switches dissipation off.
  double phonon_scale = 1.0;
  /// Gate duration override in ns; 0 derives it from the simulated Rabi
  /// oscillation.
  double gate_time = 0.0;
  /// Keep only the resonant qubit coupling, in the frame rotating with H_dc.
  bool rotating_wave = false;

  void validate() const;
};

struct MicrowaveModel {
  Eigen::VectorXd energies;  // H_dc eigenvalues, ascending, rad/ns
  CMatrix drive;             // drive operator per unit cos(omega t), eigenbasis
  std::vector<Dissipator> dissipators;  // eigenbasis
  double omega_s = 0.0;
  double rabi_estimate = 0.0;  // |<1|drive|2>|
};

/// H_dc eigenbasis with the phase of |2> fixed so that <1|drive|2> = -i|.|,
/// which makes the resonant drive a rotation about +y.
MicrowaveModel microwave_model(const MicrowaveConfig& cfg);
/// Time of the first minimum of the |1> population under the dissipation-free drive.
double first_population_minimum(const MicrowaveConfig& cfg);
RotationChannel microwave_pi2(const MicrowaveConfig& cfg);

struct OpticalModel {
  int dim = 8;
  CMatrix h0;                       // rad/ns, laser rotating frame
  std::vector<CMatrix> couplings;   // one per laser, lowering parts
  std::vector<double> dipoles;      // C m, one per laser
  struct RateTable {
    CMatrix op;
    std::vector<double> temperature;  // K, ascending
    std::vector<double> rate;         // rad/ns
    double at(double t_kelvin) const;
  };
  std::vector<RateTable> dissipators;
  std::string description;
};

/// Reads a model-definition JSON document.
OpticalModel load_optical_model(const std::string& path);
std::string default_optical_model_path();

struct OpticalConfig {
  double B_dc = 3.0;            // locked
  double theta_dc_deg = 43.11;  // locked
  double tau_pi8 = 0.08833;     // ns, FWHM of one pulse
  double E_1 = 4.08e5;          // V/m
  double E_2 = 4.08e5;
  double lambda_1 = 619.0e-9;   // m
  double lambda_2 = 619.0e-9;
  double temperature = 0.1;
  int pulses = 4;

  void validate() const;
  double sigma() const { return tau_pi8 / (2.0 * std::sqrt(2.0 * std::numbers::ln2)); }
  double pulse_window() const { return 10.0 * sigma(); }
  double gate_time() const { return pulses * pulse_window(); }
};

/// One pi/8 pulse of the optical model as a Lindblad problem.
LindbladSpec optical_pulse_spec(const OpticalConfig& cfg, const OpticalModel& model);
/// Channel of one pulse; approx_error from its |1><1| propagation.
RotationChannel optical_pi8(const OpticalConfig& cfg, const OpticalModel& model);
/// cfg.pulses compositions of the single-pulse channel.
RotationChannel optical_pi2(const OpticalConfig& cfg, const OpticalModel& model);
RotationChannel optical_pi2(const OpticalConfig& cfg);

}  // namespace g4vmem::control
