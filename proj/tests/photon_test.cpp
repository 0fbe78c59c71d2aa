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

#include "g4vmem/photon.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace g4vmem;
using boost::math::quadrature::gauss_kronrod;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

photon::PhotonSourceSpec spec_1ghz() {
  photon::PhotonSourceSpec s;
  s.omega0 = 0.0;
  s.gamma = kTwoPi;
  return s;
}

// Composite 30-point Gauss-Legendre over [a, b] split into `panels` pieces.
template <class F>
double panel_integral(F f, double a, double b, int panels) {
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
    acc += boost::math::quadrature::gauss<double, 30>::integrate(f, lo, hi);
  }
  return acc;
}

}  // namespace

TEST(PhotonSourceSpec, Validation) {
  auto s = spec_1ghz();
  EXPECT_NO_THROW(s.validate());
  s.gamma = 0.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = spec_1ghz();
  s.alpha = 1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = spec_1ghz();
  s.fidelity = 0.5;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.fidelity = 1.01;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Lorentzian, Normalized) {
  const auto s = photon::lorentzian_spectrum(spec_1ghz());
  // tan substitution: integral of |S|^2 over R equals the integral over theta
  // of |S|^2 (gamma/2) sec^2 theta.
  const double half = 0.5 * s.gamma();
  const double total = gauss_kronrod<double, 31>::integrate(
      [&](double th) {
        const double c = std::cos(th);
        return s.intensity(half * std::tan(th)) * half / (c * c);
      },
      -std::numbers::pi / 2, std::numbers::pi / 2, 15, 1e-14);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Lorentzian, HalfMaximumAndPeak) {
  const auto spec = spec_1ghz();
  const auto s = photon::lorentzian_spectrum(spec);
  EXPECT_NEAR(s.intensity(spec.gamma / 2), s.intensity(0.0) / 2, 1e-15);
  EXPECT_NEAR(s.intensity(-spec.gamma / 2), s.intensity(0.0) / 2, 1e-15);
  EXPECT_NEAR(s.intensity(0.0), 2.0 / (std::numbers::pi * spec.gamma), 1e-15);
  EXPECT_NEAR(std::norm(s(0.3)), s.intensity(0.3), 1e-15);
  EXPECT_THROW(photon::SpectralAmplitude(0.0, -1.0), std::invalid_argument);
}

TEST(Depolarize, Examples) {
  std::mt19937_64 rng(1);
  const Mat2 pure = qcore::pure(testutil::random_ket(2, rng));
  const qcore::DensityState rho(pure);
  EXPECT_LT((photon::depolarize(rho, 1.0).matrix() - pure).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((photon::depolarize(rho, 0.99).matrix() - (0.98 * pure + 0.01 * Mat2::Identity()))
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
  const qcore::DensityState mixed(Mat2(0.5 * Mat2::Identity()));
  EXPECT_LT((photon::depolarize(mixed, 0.8).matrix() - mixed.matrix()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(photon::depolarize(rho, 0.5), std::invalid_argument);
  EXPECT_THROW(photon::depolarize(rho, 1.2), std::invalid_argument);
}

TEST(Depolarize, Properties) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> uf(0.5001, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const double f = uf(rng);
    const double eps = 2.0 * (1.0 - f);
    const qcore::DensityState rho(testutil::random_density(2, rng));
    const auto out = photon::depolarize(rho, f);
    EXPECT_NEAR(out.trace(), rho.trace(), 1e-15);
    EXPECT_LT((out.matrix() - out.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-16);
    EXPECT_GE(qcore::min_eigenvalue(out.matrix()), eps / 2 * rho.trace() - 1e-14);

    const qcore::DensityState p(qcore::pure(testutil::random_ket(2, rng)));
    const auto dp = photon::depolarize(p, f);
    EXPECT_NEAR(qcore::bell_fidelity(dp), (1 - eps) * qcore::bell_fidelity(p) + eps / 2, 1e-14);
    EXPECT_NEAR(qcore::mixed_fidelity(p, dp), f, 1e-9);
  }
}

TEST(InputMode, Examples) {
  const auto spec = spec_1ghz();
  EXPECT_EQ(photon::input_mode(0.0, spec, 1e-3), cplx(1e-3, 0.0));
  const double energy =
      panel_integral([&](double t) { return std::norm(photon::input_mode(t, spec, 1e-3)); }, 0.0,
                     40.0 / spec.gamma, 8);
  EXPECT_NEAR(energy, 1e-6 / spec.gamma, 1e-18);
  for (double t : {0.0, 0.1, 0.7, 3.0})
    EXPECT_LT(std::abs(photon::input_mode(t, spec, 2e-3) - 2.0 * photon::input_mode(t, spec, 1e-3)),
              1e-18);
}

TEST(InputMode, FourierPairOfSpectrum) {
  auto spec = spec_1ghz();
  spec.omega0 = 3.0;
  const auto s = photon::lorentzian_spectrum(spec);
  const double t_end = 70.0 / spec.gamma;
  for (double x = -20.0; x <= 20.0; x += 0.5) {
    const double w = spec.omega0 + x * spec.gamma;
    const auto ft = [&](double t) { return photon::input_mode(t, spec, 1.0) * std::exp(cplx(0.0, -w * t)); };
    const int panels = 200;
    const double re = panel_integral([&](double t) { return ft(t).real(); }, 0.0, t_end, panels);
    const double im = panel_integral([&](double t) { return ft(t).imag(); }, 0.0, t_end, panels);
    const double power = (re * re + im * im) * spec.gamma / kTwoPi;
    EXPECT_NEAR(power / s.intensity(w), 1.0, 1e-6) << "x = " << x;
  }
}
