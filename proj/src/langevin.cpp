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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace g4vmem::langevin {

void LangevinParams::validate() const {
  cav.validate();
  drive.validate();
  if (!(e0 > 0.0)) throw std::invalid_argument("e0 must be positive");
  if (!(duration_factor >= 20.0)) throw std::invalid_argument("duration_factor must be at least 20");
  if (!(rtol > 0.0) || !(atol > 0.0)) throw std::invalid_argument("solver tolerances must be positive");
  if (samples_per_period < 16) throw std::invalid_argument("samples_per_period must be at least 16");
}

namespace {

// Input drive relative to the cavity frame, e^{-i w t} convention.
cplx drive_at(const LangevinParams& p, double t) {
  const double detuning = p.drive.omega0 - p.cav.omega_c;
  return p.e0 * std::exp(cplx(-0.5 * p.drive.gamma * t, -detuning * t));
}

void rhs(const LangevinParams& p, double t, const CVector& y, CVector& dy) {
  const auto& c = p.cav;
  const auto& l = c.levels;
  const double ws = l.omega_s;
  const cplx up = std::exp(cplx(0.0, ws * t));  // e^{+i ws t}
  const cplx dn = std::conj(up);
  const double dA = p.delta();
  const double dB = l.omega_2B - c.omega_c;
  const double gA = 0.5 * l.gamma_A(), gB = 0.5 * l.gamma_B();
  const cplx g1A = c.g_1A, g2A = c.g_2A, g1B = c.g_1B, g2B = c.g_2B;

  const cplx a = y[kA], s1A = y[kS1A], s2A = y[kS2A], s1B = y[kS1B], s2B = y[kS2B];
  const cplx p11 = y[kP11], p22 = y[kP22], pAA = y[kPAA], pBB = y[kPBB];
  const cplx ac = std::conj(a);

  dy[kA] = -kI * (g1A * s1A + up * g2A * s2A + dn * g1B * s1B + g2B * s2B) - c.kappa * a +
           std::sqrt(2.0 * c.kappa) * drive_at(p, t);
  dy[kS1A] = -kI * (dA * s1A + dn * std::conj(g2A) * s1A * std::conj(s2A) * a -
                    up * std::conj(g1B) * std::conj(s1B) * s1A * a + std::conj(g1A) * a * (p11 - pAA)) -
             gA * s1A;
  dy[kS2A] = -kI * (dA * s2A + std::conj(g1A) * s2A * std::conj(s1A) * a -
                    std::conj(g2B) * std::conj(s2B) * s2A * a + dn * std::conj(g2A) * a * (p22 - pAA)) -
             gA * s2A;
  dy[kS1B] = -kI * (dB * s1B - std::conj(g1A) * std::conj(s1A) * s1B * a +
                    std::conj(g2B) * s1B * std::conj(s2B) * a + up * std::conj(g1B) * a * (p11 - pBB)) -
             gB * s1B;
  dy[kS2B] = -kI * (dB * s2B - dn * std::conj(g2A) * std::conj(s2A) * s2B * a +
                    up * std::conj(g1B) * s2B * std::conj(s1B) * a + std::conj(g2B) * a * (p22 - pBB)) -
             gB * s2B;

  // Emission terms g s a* and their conjugates, shared by the populations.
  const cplx e1A = g1A * s1A * ac, e2A = up * g2A * s2A * ac;
  const cplx e1B = dn * g1B * s1B * ac, e2B = g2B * s2B * ac;
  dy[kP11] = -kI * (e1A - std::conj(e1A) + e1B - std::conj(e1B)) + l.gamma_1A * pAA + l.gamma_1B * pBB;
  dy[kP22] = -kI * (e2A - std::conj(e2A) + e2B - std::conj(e2B)) + l.gamma_2A * pAA + l.gamma_2B * pBB;
  dy[kPAA] = kI * (e1A - std::conj(e1A) + e2A - std::conj(e2A)) - 2.0 * gA * pAA;
  dy[kPBB] = kI * (e1B - std::conj(e1B) + e2B - std::conj(e2B)) - 2.0 * gB * pBB;
}

double fastest_frequency(const LangevinParams& p) {
  const auto& c = p.cav;
  const auto& l = c.levels;
  const double g = std::max({std::abs(c.g_1A), std::abs(c.g_2B), std::abs(c.g_2A), std::abs(c.g_1B)});
  return std::max({std::abs(p.drive.omega0 - c.omega_c), std::abs(p.delta()), std::abs(p.delta_B()),
                   l.omega_s, c.kappa, p.drive.gamma, g}) +
         g;
}

}  // namespace

LangevinTrajectory propagate_langevin(const LangevinParams& p, cavity::Spin initial_spin) {
  p.validate();
  const double tf = p.t_final();
  const double wmax = fastest_frequency(p);
  const long n = std::max<long>(2000, static_cast<long>(std::ceil(tf * wmax * p.samples_per_period /
                                                                  (2.0 * std::numbers::pi))));
  const double dt = tf / n;

  CVector y = CVector::Zero(kComponents);
  y[initial_spin == cavity::Spin::One ? kP11 : kP22] = 1.0;

  LangevinTrajectory traj;
  traj.t.reserve(n + 1);
  traj.y.reserve(n + 1);
  auto record = [&](double t, const CVector& v) {
    traj.t.push_back(t);
    traj.y.push_back(v);
    traj.a_in.push_back(drive_at(p, t));
    const double sum = (v[kP11] + v[kP22] + v[kPAA] + v[kPBB]).real();
    traj.max_conservation_error = std::max(traj.max_conservation_error, std::abs(sum - 1.0));
    traj.max_excited_population =
        std::max({traj.max_excited_population, v[kPAA].real(), v[kPBB].real()});
  };
  record(0.0, y);

  ode::Options opt;
  opt.rtol = p.rtol;
  opt.atol = p.atol;
  if (p.cav.levels.omega_s > 0.0) opt.max_step = 2.0 * std::numbers::pi / (20.0 * p.cav.levels.omega_s);
  long next = 1;
  CVector buf(kComponents);
  traj.stats = ode::integrate_dopri5(
      [&](double t, const CVector& v, CVector& d) { rhs(p, t, v, d); }, y, 0.0, tf, opt,
      [&](const ode::StepView& s) {
        const double t1 = s.t0 + s.h;
        while (next <= n && next * dt <= t1 * (1.0 + 1e-14)) {
          const double th = std::clamp((next * dt - s.t0) / s.h, 0.0, 1.0);
          s.eval(th, buf);
          record(next * dt, buf);
          ++next;
        }
      });
  while (next <= n) {
    record(next * dt, y);
    ++next;
  }

  if (traj.max_excited_population > p.weak_drive_limit)
    throw NumericalError("weak-drive assumption violated: excited population " +
                         std::to_string(traj.max_excited_population) + "; reduce e0");
  return traj;
}

std::vector<cplx> output_mode(const LangevinTrajectory& traj, const LangevinParams& p) {
  const double root = std::sqrt(2.0 * p.cav.kappa);
  std::vector<cplx> out(traj.t.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::conj(root * traj.y[i][kA] - traj.a_in[i]);
  return out;
}

std::vector<cplx> input_mode(const LangevinTrajectory& traj) {
  std::vector<cplx> out(traj.a_in.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::conj(traj.a_in[i]);
  return out;
}

cavity::ReflectionIntegrals time_integrals(const std::vector<double>& t,
                                           const std::vector<cplx>& d1,
                                           const std::vector<cplx>& d2, double gamma, double e0) {
  if (t.size() != d1.size() || t.size() != d2.size() || t.size() < 2)
    throw std::invalid_argument("time_integrals: modes must share one grid");
  if (!(gamma > 0.0) || !(e0 > 0.0)) throw std::invalid_argument("time_integrals: gamma and e0 must be positive");
  if (std::exp(-gamma * (t.back() - t.front())) >= 1e-8)
    throw std::invalid_argument("time_integrals: window too short for the pulse tail");
  double i1 = 0.0, i3 = 0.0;
  cplx i2 = 0.0;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double h = 0.5 * (t[k + 1] - t[k]);
    i1 += h * (std::norm(d1[k]) + std::norm(d1[k + 1]));
    i3 += h * (std::norm(d2[k]) + std::norm(d2[k + 1]));
    i2 += h * (d1[k] * std::conj(d2[k]) + d1[k + 1] * std::conj(d2[k + 1]));
  }
  const double norm = gamma / (e0 * e0);
  return {norm * i1, norm * i2, norm * i3};
}

cavity::ReflectionIntegrals langevin_integrals(const LangevinParams& p) {
  const auto one = propagate_langevin(p, cavity::Spin::One);
  const auto two = propagate_langevin(p, cavity::Spin::Two);
  return time_integrals(one.t, output_mode(one, p), output_mode(two, p), p.drive.gamma, p.e0);
}

}  // namespace g4vmem::langevin
