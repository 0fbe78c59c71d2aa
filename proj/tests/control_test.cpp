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

#include "g4vmem/control.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace g4vmem;
using namespace g4vmem::control;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

LindbladSpec constant_spec(const CMatrix& h, double t) {
  LindbladSpec s;
  s.dim = static_cast<int>(h.rows());
  s.hamiltonian = [h](double) { return h; };
  s.t_final = t;
  return s;
}

qcore::ChannelImages unitary_images(const Mat2& u) {
  qcore::ChannelImages im;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Mat2 e = Mat2::Zero();
      e(i, j) = 1.0;
      im.set(i, j, u * e * u.adjoint());
    }
  return im;
}

double images_distance(const qcore::ChannelImages& a, const qcore::ChannelImages& b) {
  double d = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d = std::max(d, max_abs(a.at(i, j) - b.at(i, j)));
  return d;
}

const RotationChannel& optical_default() {
  static const RotationChannel ch = optical_pi2(OpticalConfig{});
  return ch;
}

const RotationChannel& microwave_default() {
  static const RotationChannel ch = microwave_pi2(MicrowaveConfig{});
  return ch;
}

}  // namespace

TEST(Lindblad, NoDynamicsLeavesStateUnchanged) {
  std::mt19937_64 rng(7);
  const qcore::DensityState rho(testutil::random_density(4, rng));
  const auto out = lindblad_propagate(constant_spec(CMatrix::Zero(4, 4), 3.0), rho);
  EXPECT_LT(max_abs(out.matrix() - rho.matrix()), 1e-14);
}

TEST(Lindblad, ResonantRabiQuarterTurn) {
  const double omega = 2.7;
  const auto spec = constant_spec(0.5 * omega * CMatrix(qcore::pauli_y()), kPi / (2.0 * omega));
  const qcore::DensityState one(qcore::basis_projector(2, 0, 0));
  const auto out = lindblad_propagate(spec, one);
  const Mat2 r = qcore::ry(kPi / 2);
  EXPECT_LT(max_abs(out.matrix() - r * one.matrix() * r.adjoint()), 1e-8);
  EXPECT_NEAR(out.matrix()(0, 1).real(), 0.5, 1e-8);
}

TEST(Lindblad, PureDephasingDecay) {
  const double gamma = 0.8, t = 1.3;
  auto spec = constant_spec(CMatrix::Zero(2, 2), t);
  spec.dissipators.push_back({gamma, qcore::pauli_z()});
  CMatrix rho(2, 2);
  rho << 0.6, cplx(0.3, 0.2), cplx(0.3, -0.2), 0.4;
  const auto out = lindblad_propagate(spec, qcore::DensityState(rho));
  EXPECT_LT(std::abs(out.matrix()(0, 1) - rho(0, 1) * std::exp(-2.0 * gamma * t)), 1e-8);
  EXPECT_NEAR(out.matrix()(0, 0).real(), 0.6, 1e-12);
}

TEST(Lindblad, PeriodicPropagatorMatchesDirectIntegration) {
  CMatrix h0 = CMatrix::Zero(3, 3);
  h0(1, 1) = 5.0;
  h0(2, 2) = 11.0;
  CMatrix v = CMatrix::Zero(3, 3);
  v(0, 1) = v(1, 0) = 0.4;
  v(1, 2) = cplx(0.0, 0.3);
  v(2, 1) = cplx(0.0, -0.3);
  LindbladSpec spec;
  spec.dim = 3;
  spec.hamiltonian = [h0, v](double t) -> CMatrix { return h0 + std::cos(5.0 * t) * v; };
  spec.dissipators.push_back({0.05, qcore::basis_projector(3, 0, 2)});
  spec.t_final = 13.7;
  std::mt19937_64 rng(3);
  const CMatrix rho = testutil::random_density(3, rng);
  const CMatrix direct = lindblad_propagate(spec, std::vector<CMatrix>{rho}).front();
  spec.period = 2.0 * kPi / 5.0;
  const CMatrix strobe = lindblad_propagate(spec, std::vector<CMatrix>{rho}).front();
  EXPECT_LT(max_abs(direct - strobe), 1e-8);
}

TEST(Lindblad, TraceAndPositivityPreserved) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const int d = 4;
    CMatrix h = testutil::random_matrix(d, rng);
    h = 0.5 * (h + h.adjoint()).eval();
    const CMatrix drive = testutil::random_matrix(d, rng);
    LindbladSpec spec;
    spec.dim = d;
    spec.hamiltonian = [h, drive](double t) -> CMatrix {
      return h + std::sin(3.0 * t) * (drive + drive.adjoint());
    };
    for (int k = 0; k < 3; ++k) spec.dissipators.push_back({0.3 * (k + 1), testutil::random_matrix(d, rng)});
    spec.t_final = 2.0;
    const qcore::DensityState rho(testutil::random_density(d, rng));
    const auto out = lindblad_propagate(spec, rho);
    EXPECT_LE(std::abs(out.trace() - rho.trace()), 10.0 * spec.rtol);
    EXPECT_GE(qcore::min_eigenvalue(out.matrix()), -10.0 * spec.rtol);
  }
}

TEST(Lindblad, RejectsInvalidSpecs) {
  auto spec = constant_spec(CMatrix::Zero(2, 2), 1.0);
  spec.dissipators.push_back({-1.0, qcore::pauli_z()});
  EXPECT_THROW(lindblad_propagate(spec, qcore::DensityState(qcore::basis_projector(2, 0, 0))),
               std::invalid_argument);
  CMatrix nh = CMatrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  EXPECT_THROW(lindblad_propagate(constant_spec(nh, 1.0), qcore::DensityState(qcore::basis_projector(2, 0, 0))),
               std::invalid_argument);
  EXPECT_THROW(lindblad_propagate(constant_spec(CMatrix::Zero(2, 2), 1.0),
                                  qcore::DensityState(qcore::basis_projector(3, 0, 0))),
               std::invalid_argument);
}

TEST(ApproximationError, HandValues) {
  CMatrix inside = CMatrix::Zero(4, 4);
  inside.topLeftCorner(2, 2) << 0.5, 0.5, 0.5, 0.5;
  EXPECT_EQ(approximation_error(inside), 0.0);

  const CMatrix diag = Eigen::Vector4d(0.5, 0.4, 0.1, 0.0).cast<cplx>().asDiagonal();
  EXPECT_NEAR(approximation_error(diag), 0.1, 1e-15);

  CMatrix coh = Eigen::Vector4d(0.9, 0.05, 0.05, 0.0).cast<cplx>().asDiagonal();
  coh(0, 2) = coh(2, 0) = 0.05;
  EXPECT_NEAR(approximation_error(coh), 0.1, 1e-15);
}

TEST(ApproximationError, ZeroIffNoSupportOutsideQubitBlock) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    CMatrix rho = CMatrix::Zero(8, 8);
    rho.topLeftCorner(2, 2) = testutil::random_density(2, rng);
    EXPECT_EQ(approximation_error(rho), 0.0);
    const int k = 2 + trial % 6;
    rho(k, k) = 1e-9;
    EXPECT_GT(approximation_error(rho), 0.0);
  }
}

TEST(Channels, IdealRotation) {
  const auto ch = ideal_pi2();
  ASSERT_EQ(ch.kraus.operators.size(), 1u);
  EXPECT_EQ(ch.kraus.operators[0], qcore::ry(kPi / 2));
  Mat2 plus;
  plus << 0.5, 0.5, 0.5, 0.5;
  EXPECT_LT(max_abs(ch.lambda() - plus), 1e-15);
  EXPECT_EQ(ch.approx_error, 0.0);
  EXPECT_EQ(ch.model, Model::Ideal);
}

TEST(Channels, PhenomenologicalIsDepolarizedIdeal) {
  const auto ch = phenomenological_pi2(0.99);
  const auto ideal = ideal_pi2();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Mat2 expect = 0.98 * ideal.images.at(i, j) + 0.01 * ideal.images.at(i, j).trace() * Mat2::Identity();
      EXPECT_LT(max_abs(ch.images.at(i, j) - expect), 1e-15);
    }
  EXPECT_GE(ch.kraus.completeness_margin(), -1e-9);
  EXPECT_THROW(phenomenological_pi2(0.4), std::invalid_argument);
}

TEST(Channels, ComposeMatchesRotationAlgebra) {
  const auto eighth = unitary_images(qcore::ry(kPi / 8));
  auto four = eighth;
  for (int k = 1; k < 4; ++k) four = compose(four, eighth);
  EXPECT_LT(images_distance(four, unitary_images(qcore::ry(kPi / 2))), 1e-14);
}

TEST(Channels, ModelNames) {
  for (Model m : {Model::Ideal, Model::Optical, Model::Microwave, Model::Phenomenological})
    EXPECT_EQ(model_from_string(to_string(m)), m);
  EXPECT_THROW(model_from_string("laser"), std::invalid_argument);
}

TEST(Microwave, RotatingWaveWithoutPhononsIsIdeal) {
  MicrowaveConfig cfg;
  cfg.phonon_scale = 0.0;
  cfg.rotating_wave = true;
  const auto ch = microwave_pi2(cfg);
  EXPECT_LT(images_distance(ch.images, ideal_pi2().images), 1e-6);
  EXPECT_LT(qcore::phase_aligned_distance(ch.kraus.operators[0], qcore::ry(kPi / 2)), 1e-6);
}

TEST(Microwave, LabFrameWithoutPhononsIsUnitary) {
  MicrowaveConfig cfg;
  cfg.phonon_scale = 0.0;
  const auto ch = microwave_pi2(cfg);
  const Mat2& k = ch.kraus.operators[0];
  EXPECT_LT(max_abs(k.adjoint() * k - Mat2::Identity()), 1e-6);
  for (std::size_t m = 1; m < ch.kraus.eigenvalues.size(); ++m) EXPECT_LT(ch.kraus.eigenvalues[m], 1e-6);
  // counter-rotating terms leave an error of order rabi / omega_s
  EXPECT_LT(qcore::phase_aligned_distance(k, qcore::ry(kPi / 2)), 1e-4);
}

TEST(Microwave, DefaultsAreCryogenicExample) {
  const auto& ch = microwave_default();
  EXPECT_GT(ch.omega_s / (2.0 * kPi), 40.0);
  EXPECT_LT(ch.omega_s / (2.0 * kPi), 121.0);
  EXPECT_GT(ch.gate_time, 0.0);
  EXPECT_GE(qcore::min_eigenvalue(ch.rho_one_full), -1e-9);
  EXPECT_GE(ch.kraus.completeness_margin(), -1e-9);
  EXPECT_GT(ch.approx_error, 9.34e-7);
  EXPECT_LT(ch.approx_error, 9.34e-5);
}

TEST(Microwave, GateTimeIsHalfTheFirstMinimum) {
  MicrowaveConfig cfg;
  const auto m = microwave_model(cfg);
  const double tmin = first_population_minimum(cfg);
  EXPECT_NEAR(tmin * m.rabi_estimate, kPi, 1e-3);
  EXPECT_NEAR(microwave_default().gate_time, 0.5 * tmin, 1e-12);
}

TEST(Microwave, NoDriveIsIdentityLike) {
  MicrowaveConfig cfg;
  cfg.B_ac = 0.0;
  EXPECT_THROW(microwave_pi2(cfg), std::invalid_argument);
  cfg.gate_time = 20.0;
  const auto ch = microwave_pi2(cfg);
  EXPECT_NEAR(ch.lambda()(0, 0).real(), 1.0, 1e-6);
  EXPECT_LT(std::abs(ch.lambda()(1, 1)), 1e-6);
  EXPECT_LT(std::abs(ch.lambda()(0, 1)), 1e-6);
}

TEST(Microwave, DegenerateSplittingThrows) {
  MicrowaveConfig cfg;
  cfg.B_dc = 0.0;
  EXPECT_THROW(microwave_pi2(cfg), NumericalError);
}

TEST(Microwave, ConfigValidation) {
  MicrowaveConfig cfg;
  cfg.phi_ac = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = MicrowaveConfig{};
  cfg.temperature = 5.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = MicrowaveConfig{};
  cfg.B_ac = -1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Microwave, LeakageGrowsWithPhononExcitation) {
  MicrowaveConfig cfg;
  cfg.gate_time = microwave_default().gate_time;
  double prev = 2.0;
  for (double kelvin : {1.0, 2.0, 4.0}) {
    cfg.temperature = kelvin;
    const double tr = microwave_pi2(cfg).lambda().trace().real();
    EXPECT_LT(tr, prev) << kelvin << " K";
    EXPECT_LE(tr, 1.0 + 1e-9);
    prev = tr;
  }
}

TEST(Optical, PulseTiming) {
  OpticalConfig cfg;
  EXPECT_NEAR(cfg.sigma(), 0.03751, 1e-5);
  EXPECT_NEAR(cfg.gate_time(), 1.5004, 1e-4);
  EXPECT_NEAR(optical_default().gate_time, 40.0 * cfg.sigma(), 1e-12);
}

TEST(Optical, FixedFieldIsLocked) {
  OpticalConfig cfg;
  cfg.B_dc = 2.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = OpticalConfig{};
  cfg.theta_dc_deg = 40.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = OpticalConfig{};
  cfg.temperature = 0.05;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Optical, DefaultModelRealizesQuarterTurn) {
  const auto& ch = optical_default();
  EXPECT_LT(qcore::phase_aligned_distance(ch.kraus.operators[0], qcore::ry(kPi / 2)), 1e-2);
  EXPECT_GE(ch.kraus.completeness_margin(), -1e-9);
  EXPECT_GE(qcore::min_eigenvalue(ch.rho_one_full), -1e-8);
  EXPECT_GT(ch.approx_error, 8.53e-6);
  EXPECT_LT(ch.approx_error, 8.53e-4);
  EXPECT_LE(ch.lambda().trace().real(), 1.0 + 1e-9);
}

TEST(Optical, CompositionIsAssociative) {
  const auto eighth = optical_pi8(OpticalConfig{}, load_optical_model(default_optical_model_path()));
  const auto quarter = compose(eighth.images, eighth.images);
  auto sequential = eighth.images;
  for (int k = 1; k < 4; ++k) sequential = compose(sequential, eighth.images);
  EXPECT_LT(images_distance(compose(quarter, quarter), sequential), 1e-10);
  EXPECT_LT(images_distance(sequential, optical_default().images), 1e-10);
}

TEST(Optical, WithoutDissipationSingleUnitaryOperator) {
  auto model = load_optical_model(default_optical_model_path());
  model.dissipators.clear();
  const auto ch = optical_pi2(OpticalConfig{}, model);
  // coherent leakage into the excited states is the only loss left
  for (std::size_t m = 1; m < ch.kraus.eigenvalues.size(); ++m) EXPECT_LT(ch.kraus.eigenvalues[m], 1e-6);
  const Mat2& k = ch.kraus.operators[0];
  EXPECT_LT(max_abs(k.adjoint() * k - Mat2::Identity()), 1e-6);
}

TEST(OpticalModelFile, RateTableInterpolates) {
  OpticalModel::RateTable t;
  t.temperature = {0.1, 1.0, 4.0};
  t.rate = {1.0, 2.0, 8.0};
  EXPECT_DOUBLE_EQ(t.at(0.1), 1.0);
  EXPECT_DOUBLE_EQ(t.at(0.55), 1.5);
  EXPECT_DOUBLE_EQ(t.at(2.5), 5.0);
  EXPECT_DOUBLE_EQ(t.at(4.0), 8.0);
  EXPECT_THROW(t.at(5.0), std::invalid_argument);
}

TEST(OpticalModelFile, RejectsMalformedDocuments) {
  EXPECT_THROW(load_optical_model("/nonexistent/model.json"), std::invalid_argument);
  const auto path = std::filesystem::temp_directory_path() / "g4vmem_bad_model.json";
  {
    std::ofstream out(path);
    out << R"({"dim": 2, "h0": [[[0,0],[0,0]],[[0,0],[0,0]]], "lasers": [], "dissipators": [], "extra": 1})";
  }
  EXPECT_THROW(load_optical_model(path.string()), std::invalid_argument);
  {
    std::ofstream out(path);
    out << R"({"dim": 2, "h0": [[[0,0],[0,0]]], "lasers": [], "dissipators": []})";
  }
  EXPECT_THROW(load_optical_model(path.string()), std::invalid_argument);
  std::filesystem::remove(path);
}

TEST(OpticalModelFile, DefaultLoads) {
  const auto m = load_optical_model(default_optical_model_path());
  EXPECT_EQ(m.dim, 8);
  EXPECT_EQ(m.couplings.size(), 2u);
  EXPECT_FALSE(m.description.empty());
  for (const auto& d : m.dissipators)
    for (double r : d.rate) EXPECT_GE(r, 0.0);
}
