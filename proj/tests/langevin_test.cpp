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

#include "g4vmem/langevin.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

using namespace g4vmem;
using namespace g4vmem::langevin;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

LangevinParams base(double cavity_offset = 3.0, double kappa = 60.0, double bw_ghz = 1.0,
                    double drive_offset = 2.0, bool cross_talk = false) {
  cavity::SnvParams sp;
  sp.delta_omega_s = kTwoPi * 10.0;
  sp.omega_s = kTwoPi * 5.0;
  const auto l = cavity::snv_levels(sp);
  LangevinParams p;
  p.cav = cavity::make_cavity(l, l.omega_1A + cavity_offset, kappa, cavity::Geometry{});
  if (!cross_talk) p.cav.g_2A = p.cav.g_1B = 0.0;
  p.drive.omega0 = l.omega_1A + drive_offset;
  p.drive.gamma = kTwoPi * bw_ghz;
  return p;
}

// Trapezoid Fourier transform in the e^{+i w t} convention: int f(t) e^{-i w t}.
cplx fourier(const std::vector<double>& t, const std::vector<cplx>& f, double w) {
  cplx acc = 0.0;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double h = 0.5 * (t[k + 1] - t[k]);
    acc += h * (f[k] * std::exp(cplx(0.0, -w * t[k])) + f[k + 1] * std::exp(cplx(0.0, -w * t[k + 1])));
  }
  return acc;
}

double max_diff(const cavity::ReflectionIntegrals& a, const cavity::ReflectionIntegrals& b) {
  return std::max({std::abs(a.I1 - b.I1), std::abs(a.I2 - b.I2), std::abs(a.I3 - b.I3)});
}

}  // namespace

TEST(Langevin, BareResonantCavityReflectsWithPlusOne) {
  auto p = base(0.0);
  p.cav.g_1A = p.cav.g_2B = 0.0;
  p.drive.omega0 = p.cav.omega_c;
  const auto tr = propagate_langevin(p, cavity::Spin::One);
  const auto d = output_mode(tr, p);
  const auto in = input_mode(tr);
  // A decaying drive e^{-gamma t / 2} is followed with gain (kappa + gamma/2) / (kappa - gamma/2).
  const double k = p.cav.kappa, h = 0.5 * p.drive.gamma;
  const double gain = (k + h) / (k - h);
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    if (tr.t[i] < 30.0 / k || tr.t[i] > 4.0 / p.drive.gamma) continue;
    EXPECT_LT(std::abs(d[i] / in[i] - gain), 1e-5) << "t = " << tr.t[i];
  }
}

TEST(Langevin, FourierRatioMatchesReflection) {
  const auto p = base();
  const auto tr = propagate_langevin(p, cavity::Spin::One);
  const auto d = output_mode(tr, p);
  const auto in = input_mode(tr);
  for (double x = -1.5; x <= 1.5; x += 0.25) {
    const double w = p.drive.omega0 + x * p.drive.gamma;
    const double wf = w - p.cav.omega_c;
    const cplx ratio = fourier(tr.t, d, wf) / fourier(tr.t, in, wf);
    EXPECT_LT(std::abs(ratio - cavity::reflection_coefficient(w, p.cav, cavity::Spin::One)), 1e-3)
        << "x = " << x;
  }
}

TEST(Langevin, LinearInDriveAmplitude) {
  auto p = base();
  const auto a = propagate_langevin(p, cavity::Spin::One);
  p.e0 *= 2.0;
  const auto b = propagate_langevin(p, cavity::Spin::One);
  p.e0 /= 4.0;
  const auto c = propagate_langevin(p, cavity::Spin::One);
  ASSERT_EQ(a.t.size(), b.t.size());
  double scale = 0.0;
  for (const auto& y : a.y) scale = std::max(scale, std::abs(y[kA]));
  double dev2 = 0.0, dev_half = 0.0;
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    dev2 = std::max(dev2, std::abs(b.y[i][kA] - 2.0 * a.y[i][kA]));
    dev_half = std::max(dev_half, std::abs(2.0 * c.y[i][kA] - a.y[i][kA]));
  }
  EXPECT_LT(dev2 / (2.0 * scale), 1e-6);
  EXPECT_LT(dev_half / scale, 1e-5);
}

TEST(Langevin, PopulationConservedAndPhysical) {
  for (auto spin : {cavity::Spin::One, cavity::Spin::Two}) {
    const auto p = base(-5.0, 90.0, 2.0, 8.0, true);
    const auto tr = propagate_langevin(p, spin);
    EXPECT_LE(tr.max_conservation_error, 10.0 * p.rtol);
    for (const auto& y : tr.y) {
      for (int k : {kP11, kP22, kPAA, kPBB}) {
        EXPECT_LT(std::abs(y[k].imag()), 1e-9);
        EXPECT_GE(y[k].real(), -1e-9);
        EXPECT_LE(y[k].real(), 1.0 + 1e-9);
      }
    }
    EXPECT_LT(tr.max_excited_population, p.weak_drive_limit);
  }
}

TEST(Langevin, WeakDriveViolationIsReported) {
  auto p = base(0.0, 60.0, 1.0, 0.0);
  p.e0 = 1.0;
  EXPECT_THROW(propagate_langevin(p, cavity::Spin::One), NumericalError);
}

TEST(Langevin, RejectsInvalidParams) {
  auto p = base();
  p.duration_factor = 5.0;
  EXPECT_THROW(propagate_langevin(p, cavity::Spin::One), std::invalid_argument);
  p = base();
  p.e0 = 0.0;
  EXPECT_THROW(propagate_langevin(p, cavity::Spin::One), std::invalid_argument);
}

TEST(OutputMode, AlgebraicCases) {
  const auto p = base();
  LangevinTrajectory tr;
  tr.t = {0.0, 0.1, 0.2};
  tr.y.assign(3, CVector::Zero(kComponents));
  tr.a_in = {cplx(1.0, 0.5), cplx(0.2, -0.1), cplx(-0.3, 0.0)};
  const auto d = output_mode(tr, p);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(d[i], -std::conj(tr.a_in[i]));

  // Bare resonant steady state: a = sqrt(2 kappa) a_in / kappa.
  for (std::size_t i = 0; i < 3; ++i) tr.y[i][kA] = std::sqrt(2.0 * p.cav.kappa) * tr.a_in[i] / p.cav.kappa;
  const auto e = output_mode(tr, p);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT(std::abs(e[i] - std::conj(tr.a_in[i])), 1e-15);
}

TEST(OutputMode, Passive) {
  for (auto spin : {cavity::Spin::One, cavity::Spin::Two}) {
    const auto p = base(1.0, 40.0, 1.5, -1.0, true);
    const auto tr = propagate_langevin(p, spin);
    const auto d = output_mode(tr, p);
    const auto in = input_mode(tr);
    const auto I = time_integrals(tr.t, d, in, p.drive.gamma, p.e0);
    EXPECT_LE(I.I1, I.I3 + 1e-9);
  }
}

TEST(TimeIntegrals, TrivialModes) {
  const auto p = base();
  const auto tr = propagate_langevin(p, cavity::Spin::One);
  const auto in = input_mode(tr);
  std::vector<cplx> neg(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) neg[i] = -in[i];
  const auto same = time_integrals(tr.t, in, in, p.drive.gamma, p.e0);
  EXPECT_NEAR(same.I1, 1.0, 1e-6);
  EXPECT_LT(std::abs(same.I2 - 1.0), 1e-6);
  EXPECT_NEAR(same.I3, 1.0, 1e-6);
  const auto flip = time_integrals(tr.t, neg, in, p.drive.gamma, p.e0);
  EXPECT_LT(std::abs(flip.I2 + 1.0), 1e-6);
}

TEST(TimeIntegrals, Errors) {
  std::vector<double> t{0.0, 1.0};
  std::vector<cplx> d{1.0, 1.0};
  EXPECT_THROW(time_integrals(t, d, {1.0}, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(time_integrals(t, d, d, 1.0, 1.0), std::invalid_argument);
}

TEST(TimeIntegrals, AgreeWithSpectralIntegrals) {
  struct Case {
    double cavity_offset, kappa, bw_ghz, drive_offset;
  };
  for (const Case c : {Case{0.0, 40.0, 1.0, 0.0}, Case{3.0, 80.0, 2.0, 5.0}, Case{-10.0, 30.0, 0.5, -2.0},
                       Case{20.0, 150.0, 3.0, 10.0}, Case{-4.0, 60.0, 1.0, 31.4}}) {
    const auto p = base(c.cavity_offset, c.kappa, c.bw_ghz, c.drive_offset);
    const auto t = langevin_integrals(p);
    const auto f = cavity::spectral_integrals(photon::SpectralAmplitude(p.drive.omega0, p.drive.gamma), p.cav);
    EXPECT_LT(max_diff(t, f), 1e-3);
  }
}

TEST(TimeIntegrals, CrossTalkContinuity) {
  const auto ref = langevin_integrals(base());
  double prev = INFINITY;
  for (double frac : {1e-1, 1e-2, 1e-3}) {
    auto p = base();
    p.cav.g_2A = frac * p.cav.g_1A;
    p.cav.g_1B = frac * p.cav.g_2B;
    const double d = max_diff(langevin_integrals(p), ref);
    EXPECT_LT(d, prev);
    prev = d;
  }
  EXPECT_LT(prev, 1e-4);
}
