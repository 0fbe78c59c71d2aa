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

#include "g4vmem/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "g4vmem/constants.hpp"

namespace g4vmem::cavity {

namespace {

constexpr double kPerNs = 1e-9;  // SI rate -> 1/ns

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

void LevelStructure::validate() const {
  for (double r : {gamma_1A, gamma_2B, gamma_2A, gamma_1B}) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("decay rates must be non-negative");
  }
  require_positive(omega_1A, "omega_1A");
  require_positive(omega_2B, "omega_2B");
  if (!(omega_s >= 0.0)) throw std::invalid_argument("omega_s must be non-negative");
}

std::vector<std::string> LevelStructure::lint() const {
  std::vector<std::string> out;
  if (gamma_2A > 0.1 * gamma_1A) out.push_back("gamma_2A is not small compared to gamma_1A");
  if (gamma_1B > 0.1 * gamma_2B) out.push_back("gamma_1B is not small compared to gamma_2B");
  return out;
}

void CavityModel::validate() const {
  require_positive(kappa, "kappa");
  require_positive(omega_c, "omega_c");
  require_positive(geometry.V_eff, "V_eff");
  require_positive(geometry.n, "n");
  require_positive(geometry.eps_r, "eps_r");
  levels.validate();
}

std::vector<std::string> CavityModel::lint() const {
  auto out = levels.lint();
  if (levels.gamma_A() > 0.0 && kappa < levels.gamma_A())
    out.push_back("kappa is below the emitter linewidth; the cavity is not in the bad-cavity regime");
  return out;
}

bool ReflectionIntegrals::consistent(double tol) const {
  if (I1 < -tol || I1 > 1.0 + tol || I3 < -tol || I3 > 1.0 + tol) return false;
  return std::norm(I2) <= I1 * I3 + tol;
}

cplx coupling_strength(double omega_c, double dipole, const Geometry& geo) {
  require_positive(omega_c, "omega_c");
  require_positive(geo.V_eff, "V_eff");
  require_positive(geo.n, "n");
  require_positive(geo.eps_r, "eps_r");
  if (!(dipole >= 0.0)) throw std::invalid_argument("dipole must be non-negative");
  const double w = omega_c / kPerNs;
  const double lambda = 2.0 * si::pi * si::c / w;
  const double volume = geo.V_eff * lambda * lambda * lambda / (2.0 * std::pow(geo.n, 3));
  const double g = std::sqrt(w / (2.0 * si::hbar * si::eps0 * geo.eps_r * volume)) * dipole;
  return kI * (g * kPerNs);
}

double natural_decay_rate(double omega, double dipole, double n) {
  require_positive(omega, "omega");
  const double w = omega / kPerNs;
  const double rate = 4.0 * si::fine_structure * w * w * w * n * dipole * dipole /
                      (3.0 * si::c * si::c * si::e * si::e);
  return rate * kPerNs;
}

double dipole_from_rate(double omega, double gamma, double n) {
  require_positive(omega, "omega");
  if (!(gamma >= 0.0)) throw std::invalid_argument("decay rate must be non-negative");
  const double w = omega / kPerNs;
  const double rate = gamma / kPerNs;
  return std::sqrt(3.0 * si::c * si::c * si::e * si::e * rate /
                   (4.0 * si::fine_structure * w * w * w * n));
}

LevelStructure snv_levels(const SnvParams& p) {
  require_positive(p.lifetime, "lifetime");
  if (!(p.debye_waller > 0.0 && p.debye_waller <= 1.0))
    throw std::invalid_argument("debye_waller must lie in (0, 1]");
  if (!(p.cross_fraction >= 0.0 && p.cross_fraction < 1.0))
    throw std::invalid_argument("cross_fraction must lie in [0, 1)");
  LevelStructure l;
  l.omega_1A = p.omega_1A;
  l.omega_2B = p.omega_1A + p.delta_omega_s;
  l.omega_s = p.omega_s;
  const double total = 1.0 / p.lifetime;
  l.gamma_1A = l.gamma_2B = total / (1.0 + p.cross_fraction);
  l.gamma_2A = l.gamma_1B = p.cross_fraction * l.gamma_1A;
  l.dipole_1A = dipole_from_rate(l.omega_1A, p.debye_waller * l.gamma_1A, p.n);
  l.dipole_2B = dipole_from_rate(l.omega_2B, p.debye_waller * l.gamma_2B, p.n);
  l.dipole_2A = dipole_from_rate(l.omega_1A - p.omega_s, p.debye_waller * l.gamma_2A, p.n);
  l.dipole_1B = dipole_from_rate(l.omega_2B + p.omega_s, p.debye_waller * l.gamma_1B, p.n);
  l.validate();
  return l;
}

CavityModel make_cavity(const LevelStructure& levels, double omega_c, double kappa,
                        const Geometry& geo) {
  CavityModel cav;
  cav.omega_c = omega_c;
  cav.kappa = kappa;
  cav.geometry = geo;
  cav.levels = levels;
  cav.g_1A = coupling_strength(omega_c, levels.dipole_1A, geo);
  cav.g_2B = coupling_strength(omega_c, levels.dipole_2B, geo);
  cav.g_2A = coupling_strength(omega_c, levels.dipole_2A, geo);
  cav.g_1B = coupling_strength(omega_c, levels.dipole_1B, geo);
  return cav;
}

cplx reflection_coefficient(double omega, const CavityModel& cav, Spin spin) {
  const bool one = spin == Spin::One;
  const double delta_e = omega - (one ? cav.levels.omega_1A : cav.levels.omega_2B);
  const double half_width = 0.5 * (one ? cav.levels.gamma_A() : cav.levels.gamma_B());
  const double g2 = std::norm(one ? cav.g_1A : cav.g_2B);
  const cplx emitter(half_width, delta_e);
  const cplx cavity(cav.kappa, omega - cav.omega_c);
  return -1.0 + 2.0 * cav.kappa * emitter / (cavity * emitter + g2);
}

double cooperativity(cplx g, double kappa, double gamma) {
  require_positive(kappa, "kappa");
  require_positive(gamma, "gamma");
  return 2.0 * std::norm(g) / (kappa * gamma);
}

std::array<double, 4> cooperativities(const CavityModel& cav) {
  auto coop = [&](cplx g, double gamma) { return gamma > 0.0 ? cooperativity(g, cav.kappa, gamma) : 0.0; };
  const auto& l = cav.levels;
  return {coop(cav.g_1A, l.gamma_1A), coop(cav.g_2A, l.gamma_2A), coop(cav.g_1B, l.gamma_1B),
          coop(cav.g_2B, l.gamma_2B)};
}

namespace {

// (|R1|^2, |R2|^2, Re R1 R2*, Im R1 R2*) as one quadrature value. The max norm
// is dominated by the non-negative diagonal terms, so the relative stopping
// rule stays meaningful when the cross term vanishes.
struct Moments {
  std::array<double, 4> v{};

  Moments() = default;
  Moments(int) {}
  explicit Moments(std::array<double, 4> x) : v(x) {}
  Moments& operator+=(const Moments& o) {
    for (int i = 0; i < 4; ++i) v[i] += o.v[i];
    return *this;
  }
  friend Moments operator+(Moments a, const Moments& b) { return a += b; }
  friend Moments operator-(Moments a, const Moments& b) {
    for (int i = 0; i < 4; ++i) a.v[i] -= b.v[i];
    return a;
  }
  friend Moments operator-(Moments a) { return a * -1.0; }
  friend Moments operator*(Moments a, double s) {
    for (auto& x : a.v) x *= s;
    return a;
  }
  friend Moments operator*(double s, const Moments& a) { return a * s; }
  friend double abs(const Moments& a) {
    double m = 0.0;
    for (double x : a.v) m = std::max(m, std::abs(x));
    return m;
  }
};

// Features are frequencies where R varies on the scale of the given widths.
// The span covering all features is integrated in w against the Lorentzian
// density, cut at every feature and at feature +/- width; the two tails are
// integrated in theta with w = w0 + (gamma/2) tan(theta), where the density
// becomes dtheta / pi and nothing is truncated.
ReflectionIntegrals integrate_panels(const photon::SpectralAmplitude& s, const Reflection& r1,
                                     const Reflection& r2, std::vector<double> features,
                                     std::vector<double> widths, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  const double half = 0.5 * s.gamma();
  const double w0 = s.omega0();
  const double edge = 0.5 * std::numbers::pi;
  constexpr double kPi = std::numbers::pi;

  features.push_back(w0);
  widths.push_back(s.gamma());
  const double wmax = *std::max_element(widths.begin(), widths.end());
  const double margin = 20.0 * wmax;
  const double lo = *std::min_element(features.begin(), features.end()) - margin;
  const double hi = *std::max_element(features.begin(), features.end()) + margin;

  std::vector<double> cuts{lo, hi};
  constexpr int kPanels = 16;
  for (int i = 1; i < kPanels; ++i) cuts.push_back(lo + (hi - lo) * i / kPanels);
  for (double f : features) {
    cuts.push_back(f);
    for (double w : widths) {
      for (double k : {-3.0, -1.0, 1.0, 3.0}) {
        const double c = f + k * w;
        if (c > lo && c < hi) cuts.push_back(c);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double a, double b) { return std::abs(a - b) < 1e-9 * wmax; }),
             cuts.end());

  const auto moments = [&](double w, double weight) {
    const cplx a = r1(w), b = r2(w);
    const cplx ab = a * std::conj(b);
    return Moments{{std::norm(a), std::norm(b), ab.real(), ab.imag()}} * weight;
  };
  const auto in_omega = [&](double w) { return moments(w, s.intensity(w)); };
  const auto in_theta = [&](double th) { return moments(w0 + half * std::tan(th), 1.0 / kPi); };

  // Globally adaptive: bisect the panel with the largest error estimate until
  // the summed estimate meets the absolute tolerance (all integrals are O(1)).
  struct Panel {
    double a, b;
    bool theta;
    Moments value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  long evaluations = 0;
  const auto make = [&](double a, double b, bool theta) {
    double err = 0.0;
    const Moments v = theta ? gauss_kronrod<double, 15>::integrate(in_theta, a, b, 0, 0.0, &err)
                            : gauss_kronrod<double, 15>::integrate(in_omega, a, b, 0, 0.0, &err);
    evaluations += 15;
    // The reported estimate refers to the panel mapped onto [-1, 1].
    return Panel{a, b, theta, v, err * 0.5 * (b - a)};
  };

  std::priority_queue<Panel> queue;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) queue.push(make(cuts[p], cuts[p + 1], false));
  const double th_lo = std::atan((lo - w0) / half), th_hi = std::atan((hi - w0) / half);
  constexpr int kTailPanels = 4;
  for (int i = 0; i < kTailPanels; ++i) {
    const double a = -edge + (th_lo + edge) * i / kTailPanels;
    const double b = -edge + (th_lo + edge) * (i + 1) / kTailPanels;
    if (b > a) queue.push(make(a, b, true));
    const double c = th_hi + (edge - th_hi) * i / kTailPanels;
    const double d = th_hi + (edge - th_hi) * (i + 1) / kTailPanels;
    if (d > c) queue.push(make(c, d, true));
  }

  constexpr long kMaxEvaluations = 2000000;
  auto total_error = [&] {
    auto copy = queue;
    double e = 0.0;
    while (!copy.empty()) {
      e += copy.top().error;
      copy.pop();
    }
    return e;
  };
  double err = total_error();
  while (err > tol) {
    if (evaluations > kMaxEvaluations)
      throw NumericalError("spectral quadrature did not reach the requested tolerance");
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = make(worst.a, mid, worst.theta), right = make(mid, worst.b, worst.theta);
    err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    // Re-sum occasionally so cancellation in the running total cannot stall.
    if (err <= tol || evaluations % 15000 == 0) err = total_error();
  }

  Moments acc{};
  while (!queue.empty()) {
    acc += queue.top().value;
    queue.pop();
  }

  ReflectionIntegrals out;
  out.I1 = acc.v[0];
  out.I3 = acc.v[1];
  out.I2 = cplx(acc.v[2], acc.v[3]);
  if (!std::isfinite(out.I1) || !std::isfinite(out.I3) || !std::isfinite(out.I2.real()) ||
      !std::isfinite(out.I2.imag()))
    throw NumericalError("spectral quadrature did not converge");
  return out;
}

}  // namespace

ReflectionIntegrals spectral_integrals(const photon::SpectralAmplitude& s, const Reflection& r1,
                                       const Reflection& r2, double tol) {
  return integrate_panels(s, r1, r2, {}, {}, tol);
}

ReflectionIntegrals spectral_integrals(const photon::SpectralAmplitude& s, const CavityModel& cav,
                                       double tol) {
  const auto& l = cav.levels;
  const double g1 = std::abs(cav.g_1A), g2 = std::abs(cav.g_2B);
  std::vector<double> features{l.omega_1A, l.omega_2B,      cav.omega_c,     l.omega_1A - g1,
                               l.omega_1A + g1, l.omega_2B - g2, l.omega_2B + g2};
  return integrate_panels(
      s, [&](double w) { return reflection_coefficient(w, cav, Spin::One); },
      [&](double w) { return reflection_coefficient(w, cav, Spin::Two); }, features,
      {l.gamma_A(), l.gamma_B(), cav.kappa}, tol);
}

MeasuredStates measured_spin_states(cplx alpha, cplx beta, const ReflectionIntegrals& I) {
  MeasuredStates out;
  for (int sgn : {+1, -1}) {
    const double s = sgn;
    const cplx apb = alpha + s * beta;
    Mat2 m;
    m(0, 0) = 0.25 * std::norm(apb) * I.I1;
    m(0, 1) = 0.25 * apb * (std::conj(alpha) * I.I1 + s * std::conj(beta) * I.I2);
    m(1, 0) = std::conj(m(0, 1));
    m(1, 1) = 0.25 * std::norm(alpha) * I.I1 + s * 0.25 * std::conj(alpha) * beta * std::conj(I.I2) +
              s * 0.25 * alpha * std::conj(beta) * I.I2 + 0.25 * std::norm(beta) * I.I3;
    m(1, 1) = m(1, 1).real();
    (sgn > 0 ? out.plus : out.minus) = m;
  }
  return out;
}

Mat2 recovered_spin_state(const Mat2& rho_plus, const Mat2& rho_minus) {
  const Mat2 r = qcore::ry(std::numbers::pi / 2);
  const Mat2 z = qcore::pauli_z();
  return r * rho_plus * r.adjoint() + z * r * rho_minus * r.adjoint() * z;
}

EntanglementMetrics entanglement_metrics(const Mat2& rho_total) {
  const auto n = qcore::normalize(qcore::DensityState::unnormalized(rho_total));
  return {qcore::bell_fidelity(n.state), n.probability};
}

EntanglementMetrics spin_photon_metrics(const ReflectionIntegrals& I) {
  const cplx a(1.0 / std::numbers::sqrt2, 0.0);
  const auto m = measured_spin_states(a, a, I);
  return entanglement_metrics(recovered_spin_state(m.plus, m.minus));
}

CavityObjective fidelity_objective(const photon::PhotonSourceSpec& spec,
                                   const LevelStructure& levels, const Geometry& geo) {
  return [spec, levels, geo](double omega0, double omega_c, double kappa) {
    const auto cav = make_cavity(levels, omega_c, kappa, geo);
    const photon::SpectralAmplitude s(omega0, spec.gamma);
    return spin_photon_metrics(spectral_integrals(s, cav)).fidelity;
  };
}

OptimizedCavity optimize_cavity(const CavityBounds& bounds, const photon::PhotonSourceSpec& spec,
                                const LevelStructure& levels, const Geometry& geo,
                                const optimize::Options& opt, const CavityObjective& objective) {
  spec.validate();
  levels.validate();
  optimize::Box box{{bounds.omega0[0], bounds.omega_c[0], bounds.kappa[0]},
                    {bounds.omega0[1], bounds.omega_c[1], bounds.kappa[1]}};
  box.validate();
  if (!(bounds.kappa[0] > 0.0)) throw std::invalid_argument("kappa bounds must be positive");

  const CavityObjective f = objective ? objective : fidelity_objective(spec, levels, geo);
  std::vector<double> start{levels.omega_1A, levels.omega_1A, spec.gamma};
  for (std::size_t i = 0; i < 3; ++i) start[i] = std::clamp(start[i], box.lo[i], box.hi[i]);

  const auto res = optimize::maximize([&](const std::vector<double>& x) { return f(x[0], x[1], x[2]); },
                                      box, opt, start);
  OptimizedCavity out;
  out.omega0 = res.x[0];
  out.cavity = make_cavity(levels, res.x[1], res.x[2], geo);
  out.fidelity = res.value;
  out.start_fidelity = res.history.front();
  out.evaluations = res.evaluations;
  out.history = res.history;
  return out;
}

}  // namespace g4vmem::cavity
