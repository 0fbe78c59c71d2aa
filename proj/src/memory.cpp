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

#include "g4vmem/memory.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "g4vmem/langevin.hpp"

namespace g4vmem::memory {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

qcore::KrausSet extract_kraus(qcore::ChannelImages& images) {
  const Mat2 off = 0.5 * (images.at(0, 1) + images.at(1, 0).adjoint());
  images.set(0, 1, off);
  images.set(1, 0, off.adjoint());
  for (int i = 0; i < 2; ++i) images.set(i, i, 0.5 * (images.at(i, i) + images.at(i, i).adjoint()));
  return qcore::kraus_from_choi(qcore::choi_matrix(images), 1e-6);
}

Mat2 unit(int i, int j) {
  Mat2 m = Mat2::Zero();
  m(i, j) = 1.0;
  return m;
}

}  // namespace

std::string to_string(IntegralsSource s) {
  switch (s) {
    case IntegralsSource::Auto: return "auto";
    case IntegralsSource::Frequency: return "frequency";
    case IntegralsSource::Time: return "time";
  }
  return "auto";
}

IntegralsSource integrals_source_from_string(const std::string& s) {
  if (s == "auto") return IntegralsSource::Auto;
  if (s == "frequency") return IntegralsSource::Frequency;
  if (s == "time") return IntegralsSource::Time;
  throw std::invalid_argument("unknown integrals source '" + s + "'");
}

IntegralsResult reflection_integrals(const photon::PhotonSourceSpec& spec, const cavity::CavityModel& cav,
                                     IntegralsSource source, double rtol, double atol) {
  spec.validate();
  if (source == IntegralsSource::Auto) {
    const bool cross = std::abs(cav.g_2A) > 0.0 || std::abs(cav.g_1B) > 0.0;
    source = cross ? IntegralsSource::Time : IntegralsSource::Frequency;
  }
  IntegralsResult r;
  r.used = source;
  if (source == IntegralsSource::Frequency) {
    r.integrals = cavity::spectral_integrals(photon::lorentzian_spectrum(spec), cav);
  } else {
    langevin::LangevinParams p;
    p.cav = cav;
    p.drive = spec;
    p.rtol = rtol;
    p.atol = atol;
    r.integrals = langevin::langevin_integrals(p);
  }
  return r;
}

Branches measured_branches(const Mat2& rho, const cavity::ReflectionIntegrals& I, const Mat2& lambda) {
  const std::array<cplx, 4> iv{I.I1, I.I2, std::conj(I.I2), I.I3};
  Branches b;
  for (int sgn : {+1, -1}) {
    Mat2 out;
    for (int m = 0; m < 2; ++m)
      for (int k = 0; k < 2; ++k) {
        const cplx term = rho(0, 0) * iv[0] + double(sgn) * rho(0, 1) * iv[k] +
                          double(sgn) * rho(1, 0) * iv[2 * m] + rho(1, 1) * iv[2 * m + k];
        out(m, k) = 0.5 * lambda(m, k) * term;
      }
    (sgn > 0 ? b.plus : b.minus) = out;
  }
  return b;
}

ReadInChannel read_in_channel(const cavity::ReflectionIntegrals& I, const control::RotationChannel& rot) {
  if (!rot.images.complete()) throw std::invalid_argument("read_in_channel: rotation images incomplete");
  if (!I.consistent(1e-6)) throw std::invalid_argument("read_in_channel: inconsistent reflection integrals");
  const Mat2 r = qcore::ry(std::numbers::pi / 2);
  const Mat2 z = qcore::pauli_z();
  ReadInChannel ch;
  ch.integrals = I;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const auto b = measured_branches(unit(i, j), I, rot.lambda());
      ch.images.set(i, j, r * b.plus * r.adjoint());
      ch.minus_images.set(i, j, z * r * b.minus * r.adjoint() * z);
    }
  ch.kraus = extract_kraus(ch.images);
  return ch;
}

ReadOutChannel read_out_channel(const control::RotationChannel& rot) {
  if (rot.kraus.operators.empty()) throw std::invalid_argument("read_out_channel: empty rotation Kraus set");
  // Ordering (photon x spin): e1, e2, l1, l2.
  const Mat4 ue = Eigen::Vector4cd(-1.0, 1.0, 1.0, 1.0).asDiagonal();
  const Mat4 ul = Eigen::Vector4cd(1.0, 1.0, -1.0, 1.0).asDiagonal();
  ReadOutChannel ch;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Mat4 rho = Mat4::Zero();
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) rho(2 * p + i, 2 * q + j) = 0.5;
      rho = ue * rho * ue.adjoint();
      Mat4 acc = Mat4::Zero();
      for (const auto& k : rot.kraus.operators) {
        Mat4 big = Mat4::Zero();
        big.block<2, 2>(0, 0) = k;
        big.block<2, 2>(2, 2) = k;
        acc += big * rho * big.adjoint();
      }
      acc = ul * acc * ul.adjoint();
      Mat2 img;
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) img(p, q) = acc(2 * p, 2 * q);
      ch.images.set(i, j, img);
    }
  ch.kraus = extract_kraus(ch.images);
  return ch;
}

qcore::Normalized store(const qcore::DensityState& rho_ph, const ReadInChannel& ch) {
  if (rho_ph.dim() != 2) throw std::invalid_argument("store: photonic state must be 2x2");
  if (std::abs(rho_ph.trace() - 1.0) > 1e-9) throw std::invalid_argument("store: photonic state must be normalized");
  return qcore::normalize(qcore::DensityState::unnormalized(control::apply_images(ch.images, rho_ph.matrix())));
}

qcore::Normalized retrieve(const qcore::DensityState& rho_sp, const ReadOutChannel& ch) {
  if (rho_sp.dim() != 2) throw std::invalid_argument("retrieve: spin state must be 2x2");
  return qcore::normalize(qcore::DensityState::unnormalized(control::apply_images(ch.images, rho_sp.matrix())));
}

int significant_operators(const qcore::KrausSet& k, double rel_tol) {
  double top = 0.0;
  for (double w : k.eigenvalues) top = std::max(top, w);
  int n = 0;
  for (double w : k.eigenvalues) n += (w > rel_tol * top) ? 1 : 0;
  return n;
}

Mat2 ideal_chain_unitary() { return qcore::ry(-std::numbers::pi / 2); }

// ---------------------------------------------------------------------------

void Scenario::validate() const {
  photon.validate();
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    throw std::invalid_argument("control.temperature_K must be positive");
  auto ordered = [](const std::array<double, 2>& r, const char* name) {
    if (!(r[0] < r[1]) || !std::isfinite(r[0]) || !std::isfinite(r[1]))
      throw std::invalid_argument(std::string("cavity.") + name + " bounds must be finite and increasing");
  };
  if (cavity.mode == CavityMode::Optimize) {
    ordered(cavity.omega0_offset, "omega0_offset_GHz");
    ordered(cavity.omega_c_offset, "omega_c_offset_GHz");
    ordered(cavity.kappa, "kappa_GHz");
    if (!(cavity.kappa[0] > 0.0)) throw std::invalid_argument("cavity.kappa_GHz bounds must be positive");
  }
  if (cavity.mode == CavityMode::Fixed && !(cavity.fixed_kappa > 0.0))
    throw std::invalid_argument("cavity.kappa_GHz must be positive");
  if (!(cavity.geometry.V_eff > 0.0) || !(cavity.geometry.n > 0.0) || !(cavity.geometry.eps_r > 0.0))
    throw std::invalid_argument("cavity geometry values must be positive");
  switch (model) {
    case control::Model::Microwave: {
      auto mw = microwave;
      mw.temperature = temperature;
      mw.validate();
      break;
    }
    case control::Model::Optical: {
      auto op = optical;
      op.temperature = temperature;
      op.validate();
      break;
    }
    case control::Model::Phenomenological:
      if (!(gate_fidelity > 0.5 && gate_fidelity <= 1.0))
        throw std::invalid_argument("control.gate_fidelity must lie in (0.5, 1]");
      break;
    case control::Model::Ideal: break;
  }
  if (!(L_readin >= 0.0) || !(L_readout >= 0.0)) throw std::invalid_argument("resources fiber lengths must be >= 0");
  if (!(T_s >= 0.0) || !(T_m >= 0.0)) throw std::invalid_argument("resources times must be >= 0");
  if (!(c_fiber > 1e8 && c_fiber < 3e8)) throw std::invalid_argument("resources.c_fiber_m_per_s must lie in (1e8, 3e8)");
  if (!(langevin_rtol > 0.0) || !(langevin_atol > 0.0)) throw std::invalid_argument("solver tolerances must be positive");
}

CavityResult design_cavity(const Scenario& s) {
  CavityResult out;
  const auto levels = cavity::snv_levels(s.cavity.levels);
  out.omega_1A = levels.omega_1A;
  if (s.cavity.mode == CavityMode::Ideal) {
    out.integrals.integrals = {1.0, cplx(-1.0, 0.0), 1.0};
    out.integrals.used = IntegralsSource::Frequency;
    out.spin_photon = cavity::spin_photon_metrics(out.integrals.integrals);
    out.start_fidelity = out.spin_photon.fidelity;
    return out;
  }
  auto spec = s.photon;
  cavity::CavityModel cav;
  if (s.cavity.mode == CavityMode::Fixed) {
    spec.omega0 = levels.omega_1A + s.cavity.fixed_omega0_offset;
    cav = cavity::make_cavity(levels, levels.omega_1A + s.cavity.fixed_omega_c_offset, s.cavity.fixed_kappa,
                              s.cavity.geometry);
  } else {
    const double w = levels.omega_1A;
    cavity::CavityBounds b{{w + s.cavity.omega0_offset[0], w + s.cavity.omega0_offset[1]},
                           {w + s.cavity.omega_c_offset[0], w + s.cavity.omega_c_offset[1]},
                           s.cavity.kappa};
    const auto opt = cavity::optimize_cavity(b, s.photon, levels, s.cavity.geometry, s.optimizer);
    spec.omega0 = opt.omega0;
    cav = opt.cavity;
    out.start_fidelity = opt.start_fidelity;
    out.evaluations = opt.evaluations;
  }
  out.omega0 = spec.omega0;
  out.omega_c = cav.omega_c;
  out.kappa = cav.kappa;
  out.cooperativities = cavity::cooperativities(cav);
  out.warnings = cav.lint();
  out.integrals = reflection_integrals(spec, cav, s.integrals, s.langevin_rtol, s.langevin_atol);
  out.spin_photon = cavity::spin_photon_metrics(out.integrals.integrals);
  if (s.cavity.mode == CavityMode::Fixed) out.start_fidelity = out.spin_photon.fidelity;
  return out;
}

control::RotationChannel build_rotation(const Scenario& s) {
  switch (s.model) {
    case control::Model::Ideal: return control::ideal_pi2();
    case control::Model::Phenomenological: return control::phenomenological_pi2(s.gate_fidelity);
    case control::Model::Microwave: {
      auto mw = s.microwave;
      mw.temperature = s.temperature;
      return control::microwave_pi2(mw);
    }
    case control::Model::Optical: {
      auto op = s.optical;
      op.temperature = s.temperature;
      const auto model = control::load_optical_model(
          s.optical_model_path.empty() ? control::default_optical_model_path() : s.optical_model_path);
      return control::optical_pi2(op, model);
    }
  }
  throw std::invalid_argument("unknown control model");
}

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw StageError(name, e.what(), true);
  } catch (const std::exception& e) {
    throw StageError(name, e.what(), false);
  }
}

}  // namespace

Report round_trip(const Scenario& s) {
  stage("config", [&] {
    s.validate();
    return 0;
  });
  Report rep;
  rep.cavity = stage("cavity", [&] { return design_cavity(s); });
  rep.rotation = stage("rotation", [&] { return build_rotation(s); });
  rep.readin = stage("read-in", [&] { return read_in_channel(rep.cavity.integrals.integrals, rep.rotation); });
  rep.readout = stage("read-out", [&] { return read_out_channel(rep.rotation); });

  const Eigen::Vector2cd psi = s.photon.ket();
  const qcore::DensityState pure_in(qcore::pure(psi));
  rep.stored = stage("store", [&] { return store(photon::depolarize(pure_in, s.photon.fidelity), rep.readin); });
  rep.retrieved = stage("retrieve", [&] { return retrieve(rep.stored.state, rep.readout); });

  const qcore::DensityState stored_target(qcore::pure(Eigen::Vector2cd(psi(1), psi(0))));
  const Mat2 u = ideal_chain_unitary();
  const qcore::DensityState chain_target(u * pure_in.matrix() * u.adjoint());
  rep.stored_fidelity = qcore::mixed_fidelity(rep.stored.state, stored_target);
  rep.round_trip_fidelity = qcore::mixed_fidelity(rep.retrieved.state, chain_target);
  rep.success_probability = rep.stored.probability * rep.retrieved.probability;
  rep.readout_fidelity = stage("retrieve", [&] {
    const auto one = retrieve(qcore::DensityState(unit(0, 0)), rep.readout);
    return qcore::mixed_fidelity(one.state, qcore::DensityState(Mat2::Constant(0.5)));
  });

  stage("resources", [&] {
    const double n = s.cavity.geometry.n;
    if (s.model == control::Model::Optical) {
      const double sigma = s.optical.sigma() * 1e-9;
      rep.powers.laser_1 = resources::laser_power(s.optical.E_1, s.optical.lambda_1, sigma, n);
      rep.powers.laser_2 = resources::laser_power(s.optical.E_2, s.optical.lambda_2, sigma, n);
    }
    if (s.model == control::Model::Microwave) {
      rep.powers.omega_s = rep.rotation.omega_s;
      rep.powers.lambda_mw = resources::microwave_wavelength(rep.rotation.omega_s);
      rep.powers.microwave = resources::microwave_power(s.microwave.B_ac, rep.powers.lambda_mw, n);
    }
    resources::TimingConfig t;
    t.bandwidth_readin = t.bandwidth_readout = s.photon.gamma / kTwoPi * 1e9;
    t.T_g_readin = t.T_g_readout = rep.rotation.gate_time * 1e-9;
    t.T_m = s.T_m;
    t.T_s = s.T_s;
    t.L_readin = s.L_readin;
    t.L_readout = s.L_readout;
    t.c_fiber = s.c_fiber;
    rep.timing = resources::processing_time(t);
    return 0;
  });
  return rep;
}

}  // namespace g4vmem::memory
