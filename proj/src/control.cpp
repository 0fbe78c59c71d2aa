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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "g4vmem/constants.hpp"
#include "g4vmem/ode.hpp"

namespace g4vmem::control {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Column-stacked generator: vec(A X B) = (B^T (x) A) vec(X).
CMatrix kron(const CMatrix& a, const CMatrix& b);

struct Liouvillian {
  const LindbladSpec& spec;
  CMatrix dissipator;  // constant part
  CMatrix id;

  explicit Liouvillian(const LindbladSpec& s) : spec(s), id(CMatrix::Identity(s.dim, s.dim)) {
    const int d = s.dim;
    dissipator = CMatrix::Zero(d * d, d * d);
    for (const auto& k : s.dissipators) {
      if (k.rate == 0.0) continue;
      const CMatrix ldl = k.op.adjoint() * k.op;
      dissipator += k.rate * (kron(k.op.conjugate(), k.op) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id));
    }
  }

  CMatrix generator(double t) const {
    const CMatrix h = spec.hamiltonian(t);
    return dissipator - kI * (kron(id, h) - kron(h.transpose(), id));
  }

  // y holds column-stacked matrices of size dim x dim, back to back.
  void operator()(double t, const CVector& y, CVector& dy) const {
    const Eigen::Index n = spec.dim * spec.dim;
    Eigen::Map<const CMatrix> in(y.data(), n, y.size() / n);
    Eigen::Map<CMatrix> out(dy.data(), n, y.size() / n);
    out.noalias() = generator(t) * in;
  }
};

CVector stack(const std::vector<CMatrix>& ms, int d) {
  CVector y(static_cast<Eigen::Index>(ms.size()) * d * d);
  for (std::size_t k = 0; k < ms.size(); ++k)
    y.segment(static_cast<Eigen::Index>(k) * d * d, d * d) = Eigen::Map<const CVector>(ms[k].data(), d * d);
  return y;
}

std::vector<CMatrix> unstack(const CVector& y, int d) {
  std::vector<CMatrix> out;
  for (Eigen::Index b = 0; b < y.size() / (d * d); ++b)
    out.push_back(Eigen::Map<const CMatrix>(y.data() + b * d * d, d, d));
  return out;
}

CVector integrate(const LindbladSpec& spec, CVector y, double t) {
  if (t <= 0.0) return y;
  ode::Options opt;
  opt.rtol = spec.rtol;
  opt.atol = spec.atol;
  Liouvillian rhs(spec);
  ode::integrate_dopri5([&](double s, const CVector& v, CVector& dv) { rhs(s, v, dv); }, y, 0.0, t, opt);
  return y;
}

// Evolution superoperator from 0 to t by direct integration of all basis columns.
CMatrix direct_propagator(const LindbladSpec& spec, double t) {
  const int d = spec.dim;
  std::vector<CMatrix> basis;
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) basis.push_back(qcore::basis_projector(d, r, c));
  const auto out = unstack(integrate(spec, stack(basis, d), t), d);
  CMatrix s(d * d, d * d);
  for (int k = 0; k < d * d; ++k) s.col(k) = Eigen::Map<const CVector>(out[k].data(), d * d);
  return s;
}

CMatrix matrix_power(CMatrix base, long n) {
  CMatrix acc = CMatrix::Identity(base.rows(), base.cols());
  while (n > 0) {
    if (n & 1) acc = base * acc;
    n >>= 1;
    if (n) base = base * base;
  }
  return acc;
}

Mat2 qubit_block(const CMatrix& m) { return m.topLeftCorner<2, 2>(); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Bose occupation for an energy gap in rad/ns at temperature in K.
double occupation(double gap, double kelvin) {
  const double x = si::hbar * gap * 1e9 / (si::kB * kelvin);
  return x > 700.0 ? 0.0 : 1.0 / std::expm1(x);
}

}  // namespace

void LindbladSpec::validate() const {
  if (dim < 2) throw std::invalid_argument("LindbladSpec: dim must be at least 2");
  if (!hamiltonian) throw std::invalid_argument("LindbladSpec: hamiltonian missing");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw std::invalid_argument("LindbladSpec: bad t_final");
  if (!(rtol > 0.0) || !(atol > 0.0)) throw std::invalid_argument("LindbladSpec: tolerances must be positive");
  if (period < 0.0) throw std::invalid_argument("LindbladSpec: period must be non-negative");
  for (const auto& d : dissipators) {
    if (!(d.rate >= 0.0) || !std::isfinite(d.rate)) throw std::invalid_argument("LindbladSpec: rates must be non-negative");
    if (d.op.rows() != dim || d.op.cols() != dim) throw std::invalid_argument("LindbladSpec: dissipator shape");
  }
  for (double t : {0.0, 0.5 * t_final, t_final}) {
    const CMatrix h = hamiltonian(t);
    if (h.rows() != dim || h.cols() != dim) throw std::invalid_argument("LindbladSpec: hamiltonian shape");
    if (max_abs(h - h.adjoint()) > 1e-10 * std::max(1.0, max_abs(h)))
      throw std::invalid_argument("LindbladSpec: hamiltonian is not Hermitian");
  }
}

CMatrix propagator(const LindbladSpec& spec, double t) {
  spec.validate();
  if (spec.period > 0.0 && t > spec.period) {
    const long n = static_cast<long>(std::floor(t / spec.period));
    const double rest = t - n * spec.period;
    const CMatrix one = direct_propagator(spec, spec.period);
    return direct_propagator(spec, rest) * matrix_power(one, n);
  }
  return direct_propagator(spec, t);
}

std::vector<CMatrix> lindblad_propagate(const LindbladSpec& spec, const std::vector<CMatrix>& initial) {
  spec.validate();
  const int d = spec.dim;
  for (const auto& m : initial)
    if (m.rows() != d || m.cols() != d) throw std::invalid_argument("lindblad_propagate: state dimension mismatch");
  if (spec.period > 0.0 && spec.t_final > spec.period) {
    const CMatrix s = propagator(spec, spec.t_final);
    std::vector<CMatrix> out;
    for (const auto& m : initial) {
      const CVector v = s * Eigen::Map<const CVector>(m.data(), d * d);
      out.push_back(Eigen::Map<const CMatrix>(v.data(), d, d));
    }
    return out;
  }
  return unstack(integrate(spec, stack(initial, d), spec.t_final), d);
}

qcore::DensityState lindblad_propagate(const LindbladSpec& spec, const qcore::DensityState& rho0) {
  const CMatrix out = lindblad_propagate(spec, std::vector<CMatrix>{rho0.matrix()}).front();
  const double drift = max_abs(out - out.adjoint());
  if (drift > std::max(1e-8, 1e3 * spec.rtol))
    throw NumericalError("Lindblad propagation lost Hermiticity: " + std::to_string(drift));
  return qcore::DensityState::unnormalized(qcore::symmetrize(out), 1e-6);
}

double approximation_error(const CMatrix& rho_full) {
  if (rho_full.rows() != rho_full.cols() || rho_full.rows() < 2)
    throw std::invalid_argument("approximation_error expects a square matrix of dim >= 2");
  CMatrix rest = rho_full;
  rest.topLeftCorner(2, 2).setZero();
  return qcore::one_norm(rest);
}

Mat2 apply_images(const qcore::ChannelImages& images, const Mat2& x) {
  Mat2 out = Mat2::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out += x(i, j) * images.at(i, j);
  return out;
}

qcore::ChannelImages compose(const qcore::ChannelImages& first, const qcore::ChannelImages& second) {
  qcore::ChannelImages out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.set(i, j, apply_images(second, first.at(i, j)));
  return out;
}

std::string to_string(Model m) {
  switch (m) {
    case Model::Ideal: return "ideal";
    case Model::Optical: return "optical";
    case Model::Microwave: return "microwave";
    case Model::Phenomenological: return "phenomenological";
  }
  return "unknown";
}

Model model_from_string(const std::string& s) {
  for (Model m : {Model::Ideal, Model::Optical, Model::Microwave, Model::Phenomenological})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown control model '" + s + "'");
}

RotationChannel make_channel(qcore::ChannelImages images, Model model, double tol_eig) {
  const Mat2 off = 0.5 * (images.at(0, 1) + images.at(1, 0).adjoint());
  images.set(0, 1, off);
  images.set(1, 0, off.adjoint());
  for (int i = 0; i < 2; ++i) images.set(i, i, 0.5 * (images.at(i, i) + images.at(i, i).adjoint()));
  RotationChannel ch;
  ch.model = model;
  const Mat4 choi = qcore::choi_matrix(images);
  Eigen::SelfAdjointEigenSolver<Mat4> es(choi, Eigen::EigenvaluesOnly);
  const double top = std::max(es.eigenvalues().maxCoeff(), 1e-300);
  ch.cp_defect = std::min(0.0, es.eigenvalues().minCoeff() / top);
  ch.kraus = qcore::kraus_from_choi(choi, tol_eig);
  ch.images = images;
  return ch;
}

RotationChannel ideal_pi2() {
  const Mat2 r = qcore::ry(std::numbers::pi / 2);
  qcore::ChannelImages images;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Mat2 e = Mat2::Zero();
      e(i, j) = 1.0;
      images.set(i, j, r * e * r.adjoint());
    }
  RotationChannel ch = make_channel(images, Model::Ideal);
  ch.kraus.operators.resize(1);
  ch.kraus.eigenvalues.resize(1);
  ch.kraus.operators[0] = r;
  return ch;
}

RotationChannel phenomenological_pi2(double f_gate) {
  if (!(f_gate > 0.5 && f_gate <= 1.0)) throw std::invalid_argument("gate fidelity must lie in (0.5, 1]");
  const double eps = 2.0 * (1.0 - f_gate);
  const auto ideal = ideal_pi2();
  qcore::ChannelImages images;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Mat2& x = ideal.images.at(i, j);
      images.set(i, j, (1.0 - eps) * x + 0.5 * eps * x.trace() * Mat2::Identity());
    }
  return make_channel(images, Model::Phenomenological);
}

// ---------------------------------------------------------------- microwave

void MicrowaveConfig::validate() const {
  if (!(B_dc >= 0.0) || !(B_ac >= 0.0)) throw std::invalid_argument("magnetic fields must be non-negative");
  if (!(temperature >= 0.1 && temperature <= 4.0))
    throw std::invalid_argument("temperature must lie in [0.1, 4] K");
  if (phi_dc != 0.0 || phi_ac != -std::numbers::pi / 2)
    throw std::invalid_argument("azimuthal field angles are fixed (phi_dc = 0, phi_ac = -pi/2)");
  for (double v : {theta_dc, theta_ac, E_x, eps_xy, spin_orbit_GHz, strain_susceptibility_GHz, orbital_quenching, g_spin})
    if (!std::isfinite(v)) throw std::invalid_argument("microwave parameters must be finite");
  if (!(phonon_rate >= 0.0) || !(phonon_scale >= 0.0)) throw std::invalid_argument("phonon rates must be non-negative");
  if (!(gate_time >= 0.0)) throw std::invalid_argument("gate_time must be non-negative");
}

MicrowaveModel microwave_model(const MicrowaveConfig& cfg) {
  cfg.validate();
  CMatrix id2 = CMatrix::Identity(2, 2);
  CMatrix sx = qcore::pauli_x(), sy = qcore::pauli_y(), sz = qcore::pauli_z();
  const CMatrix lz = sy;  // orbital angular momentum in the {e_x, e_y} basis
  const double gamma_l = si::muB / si::hbar * 1e-9;  // rad/ns per T
  const double gamma_s = cfg.g_spin * gamma_l;
  const double lambda = kTwoPi * cfg.spin_orbit_GHz;
  const double alpha = kTwoPi * cfg.strain_susceptibility_GHz * cfg.E_x;
  const double beta = -2.0 * kTwoPi * cfg.strain_susceptibility_GHz * cfg.eps_xy;

  auto field = [](double b, double theta, double phi) {
    return Eigen::Vector3d(b * std::sin(theta) * std::cos(phi), b * std::sin(theta) * std::sin(phi), b * std::cos(theta));
  };
  auto zeeman = [&](const Eigen::Vector3d& b) {
    return CMatrix(cfg.orbital_quenching * gamma_l * b.z() * kron(lz, id2) +
                   0.5 * gamma_s * kron(id2, b.x() * sx + b.y() * sy + b.z() * sz));
  };
  const CMatrix h_dc = -0.5 * lambda * kron(lz, sz) + kron(alpha * sz + beta * sx, id2) +
                       zeeman(field(cfg.B_dc, cfg.theta_dc, cfg.phi_dc));
  const CMatrix v_lab = zeeman(field(cfg.B_ac, cfg.theta_ac, cfg.phi_ac));

  Eigen::SelfAdjointEigenSolver<CMatrix> es(h_dc);
  CMatrix u = es.eigenvectors();
  for (int k = 0; k < 4; ++k) {
    Eigen::Index imax;
    u.col(k).cwiseAbs().maxCoeff(&imax);
    u.col(k) *= std::abs(u(imax, k)) / u(imax, k);
  }
  MicrowaveModel m;
  m.energies = es.eigenvalues();
  m.omega_s = m.energies(1) - m.energies(0);
  if (m.omega_s < 1e-3) throw NumericalError("degenerate qubit splitting; no resonant drive can be defined");
  CMatrix v = u.adjoint() * v_lab * u;
  if (std::abs(v(0, 1)) > 0.0) {
    const cplx phase = -kI * std::abs(v(0, 1)) / v(0, 1);
    u.col(1) *= phase;
    v = u.adjoint() * v_lab * u;
  }
  m.drive = 0.5 * (v + v.adjoint());
  m.rabi_estimate = std::abs(m.drive(0, 1));

  const CMatrix ox = u.adjoint() * kron(sx, id2) * u, oz = u.adjoint() * kron(sz, id2) * u;
  const double scale = cfg.phonon_rate * cfg.phonon_scale;
  for (int l = 0; l < 2; ++l)
    for (int h = 2; h < 4; ++h) {
      const double weight = std::norm(ox(l, h)) + std::norm(oz(l, h));
      const double n = occupation(m.energies(h) - m.energies(l), cfg.temperature);
      m.dissipators.push_back({scale * weight * (n + 1.0), qcore::basis_projector(4, l, h)});
      m.dissipators.push_back({scale * weight * n, qcore::basis_projector(4, h, l)});
    }
  return m;
}

namespace {

LindbladSpec microwave_spec(const MicrowaveModel& m, bool dissipative, bool rotating_wave) {
  LindbladSpec spec;
  spec.dim = 4;
  const double w = m.omega_s;
  if (rotating_wave) {
    CMatrix h = CMatrix::Zero(4, 4);
    h(0, 1) = 0.5 * m.drive(0, 1);
    h(1, 0) = std::conj(h(0, 1));
    spec.hamiltonian = [h](double) -> CMatrix { return h; };
  } else {
    const CMatrix h0 = m.energies.cast<cplx>().asDiagonal();
    const CMatrix v = m.drive;
    spec.hamiltonian = [h0, v, w](double t) -> CMatrix { return h0 + std::cos(w * t) * v; };
  }
  spec.period = kTwoPi / w;
  if (dissipative) spec.dissipators = m.dissipators;
  return spec;
}

}  // namespace

double first_population_minimum(const MicrowaveConfig& cfg) {
  const auto m = microwave_model(cfg);
  if (m.rabi_estimate <= 0.0) throw std::invalid_argument("no drive: the Rabi oscillation is undefined");
  auto spec = microwave_spec(m, false, cfg.rotating_wave);
  spec.t_final = spec.period;
  const CMatrix one = propagator(spec, spec.period);
  CVector v = CVector::Zero(16);
  v(0) = 1.0;
  const long limit = static_cast<long>(std::ceil(3.0 * std::numbers::pi / m.rabi_estimate / spec.period)) + 3;
  std::vector<double> pop{1.0};
  for (long k = 1; k <= limit; ++k) {
    v = one * v;
    pop.push_back(v(0).real());
    const std::size_t n = pop.size();
    if (n >= 3 && pop[n - 2] < pop[n - 3] && pop[n - 2] <= pop[n - 1]) {
      const double a = pop[n - 3], b = pop[n - 2], c = pop[n - 1];
      const double denom = a - 2.0 * b + c;
      const double shift = denom > 0.0 ? 0.5 * (a - c) / denom : 0.0;
      return (static_cast<double>(n - 2) + shift) * spec.period;
    }
  }
  throw NumericalError("no population minimum found within three Rabi estimates");
}

RotationChannel microwave_pi2(const MicrowaveConfig& cfg) {
  const auto m = microwave_model(cfg);
  const double tg = cfg.gate_time > 0.0 ? cfg.gate_time : 0.5 * first_population_minimum(cfg);
  auto spec = microwave_spec(m, true, cfg.rotating_wave);
  spec.t_final = tg;
  const CMatrix s = propagator(spec, tg);

  auto evolve = [&](int i, int j) {
    const CMatrix e = qcore::basis_projector(4, i, j);
    const CVector out = s * Eigen::Map<const CVector>(e.data(), 16);
    CMatrix rho = Eigen::Map<const CMatrix>(out.data(), 4, 4);
    if (!cfg.rotating_wave)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) rho(a, b) *= std::exp(kI * ((m.energies(a) - m.energies(b)) * tg));
    return rho;
  };
  qcore::ChannelImages images;
  CMatrix full_one;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const CMatrix rho = evolve(i, j);
      if (i == 0 && j == 0) full_one = rho;
      images.set(i, j, qubit_block(rho));
    }
  RotationChannel ch = make_channel(images, Model::Microwave);
  ch.rho_one_full = qcore::symmetrize(full_one);
  ch.approx_error = approximation_error(ch.rho_one_full);
  ch.gate_time = tg;
  ch.omega_s = m.omega_s;
  return ch;
}

// ---------------------------------------------------------------- optical

void OpticalConfig::validate() const {
  if (B_dc != 3.0 || theta_dc_deg != 43.11)
    throw std::invalid_argument("optical control uses the fixed field B_dc = 3.0 T, theta_dc = 43.11 deg");
  if (!(tau_pi8 > 0.0)) throw std::invalid_argument("tau_pi8 must be positive");
  if (!(E_1 >= 0.0) || !(E_2 >= 0.0)) throw std::invalid_argument("laser amplitudes must be non-negative");
  if (!(lambda_1 > 0.0) || !(lambda_2 > 0.0)) throw std::invalid_argument("laser wavelengths must be positive");
  if (!(temperature >= 0.1 && temperature <= 4.0)) throw std::invalid_argument("temperature must lie in [0.1, 4] K");
  if (pulses < 1) throw std::invalid_argument("pulses must be at least 1");
}

double OpticalModel::RateTable::at(double t_kelvin) const {
  if (temperature.empty()) throw std::invalid_argument("empty rate table");
  if (t_kelvin < temperature.front() || t_kelvin > temperature.back())
    throw std::invalid_argument("temperature outside the tabulated range");
  const auto it = std::upper_bound(temperature.begin(), temperature.end(), t_kelvin);
  if (it == temperature.end()) return rate.back();
  const std::size_t k = static_cast<std::size_t>(it - temperature.begin());
  if (k == 0) return rate.front();
  const double x = (t_kelvin - temperature[k - 1]) / (temperature[k] - temperature[k - 1]);
  return (1.0 - x) * rate[k - 1] + x * rate[k];
}

namespace {

CMatrix read_matrix(const nlohmann::json& j, int dim, const std::string& what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) throw std::invalid_argument(what + ": expected " + std::to_string(dim) + " rows");
  CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != dim) throw std::invalid_argument(what + ": bad row");
    for (int c = 0; c < dim; ++c) {
      const auto& z = row[c];
      if (!z.is_array() || z.size() != 2) throw std::invalid_argument(what + ": entries are [re, im] pairs");
      m(r, c) = cplx(z[0].get<double>(), z[1].get<double>());
    }
  }
  return m;
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> keys, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
      throw std::invalid_argument(where + ": unknown key '" + it.key() + "'");
}

}  // namespace

OpticalModel load_optical_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open optical model file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("optical model file " + path + ": " + e.what());
  }
  try {
    reject_unknown(j, {"description", "dim", "h0", "lasers", "dissipators"}, "optical model");
    OpticalModel m;
    m.description = j.value("description", "");
    m.dim = j.at("dim").get<int>();
    if (m.dim < 2) throw std::invalid_argument("optical model: dim must be at least 2");
    m.h0 = read_matrix(j.at("h0"), m.dim, "h0");
    for (const auto& l : j.at("lasers")) {
      reject_unknown(l, {"coupling", "dipole_Cm"}, "laser");
      m.couplings.push_back(read_matrix(l.at("coupling"), m.dim, "laser coupling"));
      m.dipoles.push_back(l.at("dipole_Cm").get<double>());
    }
    if (m.couplings.size() != 2) throw std::invalid_argument("optical model: exactly two lasers expected");
    for (const auto& d : j.at("dissipators")) {
      reject_unknown(d, {"operator", "temperature_K", "rate_per_ns", "label"}, "dissipator");
      OpticalModel::RateTable t;
      t.op = read_matrix(d.at("operator"), m.dim, "dissipator");
      t.temperature = d.at("temperature_K").get<std::vector<double>>();
      t.rate = d.at("rate_per_ns").get<std::vector<double>>();
      if (t.temperature.size() != t.rate.size() || t.temperature.empty())
        throw std::invalid_argument("dissipator: rate table lengths differ");
      if (!std::is_sorted(t.temperature.begin(), t.temperature.end()))
        throw std::invalid_argument("dissipator: temperatures must ascend");
      m.dissipators.push_back(std::move(t));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("optical model file " + path + ": " + e.what());
  }
}

std::string default_optical_model_path() { return std::string(G4VMEM_DATA_DIR) + "/optical_default.json"; }

LindbladSpec optical_pulse_spec(const OpticalConfig& cfg, const OpticalModel& model) {
  cfg.validate();
  LindbladSpec spec;
  spec.dim = model.dim;
  const double sigma = cfg.sigma(), window = cfg.pulse_window();
  const double omega1 = model.dipoles[0] * cfg.E_1 / si::hbar * 1e-9;
  const double omega2 = model.dipoles[1] * cfg.E_2 / si::hbar * 1e-9;
  const CMatrix c1 = model.couplings[0] + model.couplings[0].adjoint();
  const CMatrix c2 = model.couplings[1] + model.couplings[1].adjoint();
  const CMatrix h0 = model.h0;
  spec.hamiltonian = [=](double t) -> CMatrix {
    const double x = (t - 0.5 * window) / sigma;
    const double f = std::exp(-0.5 * x * x);
    return h0 - 0.5 * f * (omega1 * c1 + omega2 * c2);
  };
  for (const auto& d : model.dissipators) spec.dissipators.push_back({d.at(cfg.temperature), d.op});
  spec.t_final = window;
  spec.rtol = 1e-9;
  spec.atol = 1e-12;
  return spec;
}

RotationChannel optical_pi8(const OpticalConfig& cfg, const OpticalModel& model) {
  const auto spec = optical_pulse_spec(cfg, model);
  std::vector<CMatrix> basis;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) basis.push_back(qcore::basis_projector(model.dim, i, j));
  const auto out = lindblad_propagate(spec, basis);
  qcore::ChannelImages images;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) images.set(i, j, qubit_block(out[2 * i + j]));
  RotationChannel ch = make_channel(images, Model::Optical);
  ch.rho_one_full = qcore::symmetrize(out[0]);
  ch.approx_error = approximation_error(ch.rho_one_full);
  ch.gate_time = cfg.pulse_window();
  return ch;
}

RotationChannel optical_pi2(const OpticalConfig& cfg, const OpticalModel& model) {
  const RotationChannel one = optical_pi8(cfg, model);
  qcore::ChannelImages images = one.images;
  for (int k = 1; k < cfg.pulses; ++k) images = compose(images, one.images);
  RotationChannel ch = make_channel(images, Model::Optical);
  ch.rho_one_full = one.rho_one_full;
  ch.approx_error = one.approx_error;
  ch.gate_time = cfg.gate_time();
  return ch;
}

RotationChannel optical_pi2(const OpticalConfig& cfg) {
  return optical_pi2(cfg, load_optical_model(default_optical_model_path()));
}

}  // namespace g4vmem::control
