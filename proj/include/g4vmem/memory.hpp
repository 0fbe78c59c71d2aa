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

#include <stdexcept>
#include <string>
#include <vector>

#include "g4vmem/cavity.hpp"
#include "g4vmem/control.hpp"
#include "g4vmem/optimize.hpp"
#include "g4vmem/photon.hpp"
#include "g4vmem/qcore.hpp"
#include "g4vmem/resources.hpp"

// Read-in (photon -> spin) and read-out (spin -> photon) channels and the
// store/retrieve round trip. Photonic basis index 0 = |e>, 1 = |l>; spin
// index 0 = |1>, 1 = |2>.
namespace g4vmem::memory {

enum class IntegralsSource { Auto, Frequency, Time };
std::string to_string(IntegralsSource s);
IntegralsSource integrals_source_from_string(const std::string& s);

struct IntegralsResult {
  cavity::ReflectionIntegrals integrals;
  IntegralsSource used = IntegralsSource::Frequency;
};

/// Auto picks the time-domain path when any cross coupling is nonzero.
/// spec.omega0 is absolute.
IntegralsResult reflection_integrals(const photon::PhotonSourceSpec& spec, const cavity::CavityModel& cav,
                                     IntegralsSource source = IntegralsSource::Auto, double rtol = 1e-8,
                                     double atol = 1e-10);

/// Spin states after the photon X measurement, before any recovery.
struct Branches {
  Mat2 plus;
  Mat2 minus;
};
/// Both outcomes for photonic input rho_ph, given the rotation image Lambda = D(|1><1|).
Branches measured_branches(const Mat2& rho_ph, const cavity::ReflectionIntegrals& I, const Mat2& lambda);

struct ReadInChannel {
  qcore::ChannelImages images;        // + outcome after R_y(pi/2)
  qcore::KrausSet kraus;
  qcore::ChannelImages minus_images;  // - outcome after sigma_z R_y(pi/2), not in the Kraus set
  cavity::ReflectionIntegrals integrals;
};

ReadInChannel read_in_channel(const cavity::ReflectionIntegrals& I, const control::RotationChannel& rot);

struct ReadOutChannel {
  qcore::ChannelImages images;
  qcore::KrausSet kraus;
};

/// Auxiliary photon |+>, CPHASE on |e,1>, rotation on the spin, CPHASE on
/// |l,1>, spin projected onto |1>.
ReadOutChannel read_out_channel(const control::RotationChannel& rot);

/// Apply the images and normalize; throws NumericalError on a vanishing branch.
qcore::Normalized store(const qcore::DensityState& rho_ph, const ReadInChannel& ch);
qcore::Normalized retrieve(const qcore::DensityState& rho_sp, const ReadOutChannel& ch);

/// Number of Kraus operators whose weight exceeds rel_tol times the largest.
int significant_operators(const qcore::KrausSet& k, double rel_tol = 1e-6);

/// Ideal read-in followed by ideal read-out maps rho to U rho U^dagger with
/// this U = R_y(-pi/2).
Mat2 ideal_chain_unitary();

// ---------------------------------------------------------------------------
// Scenarios

enum class CavityMode { Optimize, Fixed, Ideal };

/// SnV defaults with an 84 GHz ground splitting and a 10 GHz optical contrast.
inline cavity::SnvParams scenario_levels() {
  cavity::SnvParams p;
  p.omega_s = 2.0 * std::numbers::pi * 84.0;
  p.delta_omega_s = 2.0 * std::numbers::pi * 10.0;
  return p;
}

struct CavitySetup {
  CavityMode mode = CavityMode::Optimize;
  // Offsets from the |1>-|A> line, rad/ns; kappa in rad/ns.
  std::array<double, 2> omega0_offset{-2.0 * std::numbers::pi * 20.0, 2.0 * std::numbers::pi * 20.0};
  std::array<double, 2> omega_c_offset{-2.0 * std::numbers::pi * 20.0, 2.0 * std::numbers::pi * 20.0};
  std::array<double, 2> kappa{2.0 * std::numbers::pi * 1.0, 2.0 * std::numbers::pi * 200.0};
  double fixed_omega0_offset = 0.0;
  double fixed_omega_c_offset = 0.0;
  double fixed_kappa = 0.0;
  cavity::Geometry geometry;
  cavity::SnvParams levels = scenario_levels();
};

struct Scenario {
  control::Model model = control::Model::Ideal;
  photon::PhotonSourceSpec photon;
  CavitySetup cavity;
  control::MicrowaveConfig microwave;
  control::OpticalConfig optical;
  std::string optical_model_path;  // empty: shipped default
  double gate_fidelity = 1.0;      // phenomenological model
  double temperature = 0.1;        // K, applied to the control model
  IntegralsSource integrals = IntegralsSource::Auto;
  double langevin_rtol = 1e-8;
  double langevin_atol = 1e-10;
  optimize::Options optimizer;
  // Resources.
  double L_readin = 100.0;  // m
  double L_readout = 100.0;
  double c_fiber = 2.0e8;
  double T_s = 0.0;    // s
  double T_m = 100e-12;

  void validate() const;
};

/// A failure annotated with the pipeline stage. invalid_input separates bad
/// configuration from numerical failure.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what, bool invalid_input)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)), detail_(what), invalid_input_(invalid_input) {}
  const std::string& stage() const { return stage_; }
  const std::string& detail() const { return detail_; }
  bool invalid_input() const { return invalid_input_; }

 private:
  std::string stage_;
  std::string detail_;
  bool invalid_input_;
};

struct CavityResult {
  double omega0 = 0.0;  // absolute, rad/ns
  double omega_c = 0.0;
  double kappa = 0.0;
  double omega_1A = 0.0;
  std::array<double, 4> cooperativities{};
  cavity::EntanglementMetrics spin_photon;
  double start_fidelity = 0.0;
  long evaluations = 0;
  IntegralsResult integrals;
  std::vector<std::string> warnings;
};

struct Powers {
  double laser_1 = 0.0;  // W
  double laser_2 = 0.0;
  double microwave = 0.0;
  double lambda_mw = 0.0;  // m
  double omega_s = 0.0;    // rad/ns
};

struct Report {
  CavityResult cavity;
  control::RotationChannel rotation;
  ReadInChannel readin;
  ReadOutChannel readout;
  qcore::Normalized stored{qcore::DensityState(Mat2::Identity() / 2.0), 0.0};
  qcore::Normalized retrieved{qcore::DensityState(Mat2::Identity() / 2.0), 0.0};
  double stored_fidelity = 0.0;      // against the ideally stored pure input
  double round_trip_fidelity = 0.0;  // against the ideal chain output
  double readout_fidelity = 0.0;     // read-out of |1><1| against |+><+|
  double success_probability = 0.0;  // store x retrieve
  Powers powers;
  resources::Timing timing;
};

/// Cavity stage only.
CavityResult design_cavity(const Scenario& s);
/// Rotation stage only.
control::RotationChannel build_rotation(const Scenario& s);

Report round_trip(const Scenario& s);

}  // namespace g4vmem::memory
