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

#include "scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <set>

namespace g4vmem::io {

const char* const kVersion = "0.1.0";

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key, double fallback) {
    if (!mark(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number()) fail(at(key), "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(at(key), "must be finite");
    return x;
  }

  double positive(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x > 0.0)) fail(at(key), "must be positive");
    return x;
  }

  double non_negative(const std::string& key, double fallback) {
    const double x = number(key, fallback);
    if (!(x >= 0.0)) fail(at(key), "must be non-negative");
    return x;
  }

  long integer(const std::string& key, long fallback) {
    if (!mark(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_number_integer()) fail(at(key), "must be an integer");
    return v.get<long>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!mark(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) fail(at(key), "must be true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!mark(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_string()) fail(at(key), "must be a string");
    return v.get<std::string>();
  }

  cplx complex(const std::string& key, cplx fallback) {
    if (!mark(key)) return fallback;
    const auto& v = j_.at(key);
    if (v.is_number()) return v.get<double>();
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      fail(at(key), "must be a number or an [re, im] pair");
    return {v[0].get<double>(), v[1].get<double>()};
  }

  std::array<double, 2> range(const std::string& key, std::array<double, 2> fallback, double scale) {
    if (!mark(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      fail(at(key), "must be a [lo, hi] pair");
    std::array<double, 2> r{scale * v[0].get<double>(), scale * v[1].get<double>()};
    if (!(r[0] < r[1])) fail(at(key), "needs lo < hi");
    return r;
  }

  Reader child(const std::string& key) {
    static const Json empty = Json::object();
    if (!mark(key)) return Reader(empty, at(key));
    return Reader(j_.at(key), at(key));
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) fail(at(k), "unknown key");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
  }

 private:
  bool mark(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void parse_microwave(Reader r, control::MicrowaveConfig& c) {
  c.B_dc = r.non_negative("B_dc_T", c.B_dc);
  c.B_ac = r.non_negative("B_ac_T", c.B_ac);
  c.theta_dc = r.number("theta_dc_rad", c.theta_dc);
  c.theta_ac = r.number("theta_ac_rad", c.theta_ac);
  c.E_x = r.number("E_x", c.E_x);
  c.eps_xy = r.number("eps_xy", c.eps_xy);
  c.spin_orbit_GHz = r.positive("spin_orbit_GHz", c.spin_orbit_GHz);
  c.strain_susceptibility_GHz = r.non_negative("strain_susceptibility_GHz", c.strain_susceptibility_GHz);
  c.orbital_quenching = r.number("orbital_quenching", c.orbital_quenching);
  c.g_spin = r.number("g_spin", c.g_spin);
  c.phonon_rate = r.non_negative("phonon_rate_per_ns", c.phonon_rate);
  c.phonon_scale = r.non_negative("phonon_scale", c.phonon_scale);
  c.gate_time = r.non_negative("gate_time_ns", c.gate_time);
  c.rotating_wave = r.boolean("rotating_wave", c.rotating_wave);
  r.finish();
}

void parse_optical(Reader r, control::OpticalConfig& c, std::string& model_path, const std::string& base_dir) {
  c.B_dc = r.number("B_dc_T", c.B_dc);
  c.theta_dc_deg = r.number("theta_dc_deg", c.theta_dc_deg);
  if (c.B_dc != 3.0 || c.theta_dc_deg != 43.11)
    Reader::fail(r.at("B_dc_T"), "optical control is fixed to B_dc = 3.0 T and theta_dc = 43.11 deg");
  c.tau_pi8 = r.positive("tau_pi8_ns", c.tau_pi8);
  c.E_1 = r.non_negative("E_1_V_per_m", c.E_1);
  c.E_2 = r.non_negative("E_2_V_per_m", c.E_2);
  c.lambda_1 = r.positive("lambda_1_m", c.lambda_1);
  c.lambda_2 = r.positive("lambda_2_m", c.lambda_2);
  const long pulses = r.integer("pulses", c.pulses);
  if (pulses < 1 || pulses > 64) Reader::fail(r.at("pulses"), "must lie in [1, 64]");
  c.pulses = static_cast<int>(pulses);
  model_path = r.string("model_file", "");
  if (!model_path.empty() && std::filesystem::path(model_path).is_relative())
    model_path = (std::filesystem::path(base_dir) / model_path).string();
  r.finish();
}

}  // namespace

ParsedScenario parse_scenario(const Json& doc, const std::string& base_dir) {
  ParsedScenario out;
  memory::Scenario& s = out.scenario;
  Reader root(doc, "");
  if (!root.has("control")) Reader::fail("control", "missing");
  if (!root.has("photon")) Reader::fail("photon", "missing");

  {
    Reader c = root.child("control");
    const std::string model = c.string("model", "");
    try {
      s.model = control::model_from_string(model);
    } catch (const std::invalid_argument&) {
      Reader::fail(c.at("model"), "must be one of optical, microwave, ideal, phenomenological");
    }
    s.temperature = c.number("temperature_K", s.temperature);
    if (!(s.temperature >= 0.1 && s.temperature <= 4.0)) Reader::fail(c.at("temperature_K"), "must lie in [0.1, 4]");
    s.gate_fidelity = c.number("gate_fidelity", s.gate_fidelity);
    if (!(s.gate_fidelity > 0.5 && s.gate_fidelity <= 1.0)) Reader::fail(c.at("gate_fidelity"), "must lie in (0.5, 1]");
    parse_microwave(c.child("microwave"), s.microwave);
    parse_optical(c.child("optical"), s.optical, s.optical_model_path, base_dir);
    c.finish();
  }
  {
    Reader p = root.child("photon");
    if (!p.has("gamma_GHz")) Reader::fail("photon.gamma_GHz", "missing");
    s.photon.gamma = kTwoPi * p.positive("gamma_GHz", 1.0);
    s.photon.fidelity = p.number("fidelity", 1.0);
    if (!(s.photon.fidelity > 0.5 && s.photon.fidelity <= 1.0)) Reader::fail(p.at("fidelity"), "must lie in (0.5, 1]");
    s.photon.alpha = p.complex("alpha", s.photon.alpha);
    s.photon.beta = p.complex("beta", s.photon.beta);
    const double norm = std::norm(s.photon.alpha) + std::norm(s.photon.beta);
    if (std::abs(norm - 1.0) > 1e-9) Reader::fail(p.at("alpha"), "|alpha|^2 + |beta|^2 must equal 1");
    // Absorb rounding in the input so the amplitudes are normalized to machine precision.
    s.photon.alpha /= std::sqrt(norm);
    s.photon.beta /= std::sqrt(norm);
    p.finish();
  }
  {
    Reader c = root.child("cavity");
    auto& cs = s.cavity;
    const std::string mode = c.string("mode", "optimize");
    if (mode == "optimize") {
      cs.mode = memory::CavityMode::Optimize;
      cs.omega0_offset = c.range("omega0_offset_GHz", cs.omega0_offset, kTwoPi);
      cs.omega_c_offset = c.range("omega_c_offset_GHz", cs.omega_c_offset, kTwoPi);
      cs.kappa = c.range("kappa_GHz", cs.kappa, kTwoPi);
      if (!(cs.kappa[0] > 0.0)) Reader::fail(c.at("kappa_GHz"), "must be positive");
    } else if (mode == "fixed") {
      cs.mode = memory::CavityMode::Fixed;
      for (const char* k : {"omega0_offset_GHz", "omega_c_offset_GHz", "kappa_GHz"})
        if (!c.has(k)) Reader::fail(c.at(k), "required for a fixed cavity");
      cs.fixed_omega0_offset = kTwoPi * c.number("omega0_offset_GHz", 0.0);
      cs.fixed_omega_c_offset = kTwoPi * c.number("omega_c_offset_GHz", 0.0);
      cs.fixed_kappa = kTwoPi * c.positive("kappa_GHz", 1.0);
    } else if (mode == "ideal") {
      cs.mode = memory::CavityMode::Ideal;
    } else {
      Reader::fail(c.at("mode"), "must be optimize, fixed or ideal");
    }
    cs.geometry.V_eff = c.positive("V_eff", cs.geometry.V_eff);
    cs.geometry.n = c.positive("n", cs.geometry.n);
    cs.geometry.eps_r = c.positive("eps_r", cs.geometry.eps_r);
    Reader l = c.child("levels");
    auto& lv = cs.levels;
    lv.omega_1A = kTwoPi * 1e3 * l.positive("optical_frequency_THz", lv.omega_1A / kTwoPi / 1e3);
    lv.lifetime = l.positive("lifetime_ns", lv.lifetime);
    lv.debye_waller = l.positive("debye_waller", lv.debye_waller);
    if (lv.debye_waller > 1.0) Reader::fail(l.at("debye_waller"), "must lie in (0, 1]");
    lv.cross_fraction = l.non_negative("cross_fraction", lv.cross_fraction);
    if (lv.cross_fraction >= 1.0) Reader::fail(l.at("cross_fraction"), "must lie in [0, 1)");
    lv.omega_s = kTwoPi * l.non_negative("spin_splitting_GHz", lv.omega_s / kTwoPi);
    lv.delta_omega_s = kTwoPi * l.number("optical_contrast_GHz", lv.delta_omega_s / kTwoPi);
    lv.n = cs.geometry.n;
    l.finish();
    c.finish();
  }
  {
    Reader r = root.child("resources");
    s.L_readin = r.non_negative("L_readin_m", s.L_readin);
    s.L_readout = r.non_negative("L_readout_m", s.L_readout);
    s.c_fiber = r.positive("c_fiber_m_per_s", s.c_fiber);
    if (!(s.c_fiber > 1e8 && s.c_fiber < 3e8)) Reader::fail(r.at("c_fiber_m_per_s"), "must lie in (1e8, 3e8)");
    s.T_s = r.non_negative("T_s_s", s.T_s);
    s.T_m = r.non_negative("T_m_s", s.T_m);
    r.finish();
  }
  {
    Reader v = root.child("solver");
    const std::string src = v.string("integrals", "auto");
    try {
      s.integrals = memory::integrals_source_from_string(src);
    } catch (const std::invalid_argument&) {
      Reader::fail(v.at("integrals"), "must be auto, frequency or time");
    }
    s.langevin_rtol = v.positive("langevin_rtol", s.langevin_rtol);
    s.langevin_atol = v.positive("langevin_atol", s.langevin_atol);
    s.optimizer.budget = v.integer("optimizer_budget", s.optimizer.budget);
    s.optimizer.global_evals = v.integer("optimizer_global_evals", s.optimizer.global_evals);
    if (s.optimizer.budget < 1 || s.optimizer.global_evals < 1)
      Reader::fail(v.at("optimizer_budget"), "budgets must be positive");
    const long seed = v.integer("seed", 0);
    if (seed < 0) Reader::fail(v.at("seed"), "must be non-negative");
    out.seed = static_cast<std::uint64_t>(seed);
    v.finish();
  }
  root.finish();

  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  return out;
}

void apply_environment(memory::Scenario& s) {
  auto read = [](const char* name, double& target) {
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return;
    char* end = nullptr;
    const double x = std::strtod(v, &end);
    if (end == v || *end != '\0' || !(x > 0.0) || !std::isfinite(x))
      throw ConfigError(std::string(name) + ": must be a positive number");
    target = x;
  };
  read("G4VMEM_LANGEVIN_RTOL", s.langevin_rtol);
  read("G4VMEM_LANGEVIN_ATOL", s.langevin_atol);
}

void make_fast(memory::Scenario& s) {
  s.integrals = memory::IntegralsSource::Frequency;
  s.model = control::Model::Phenomenological;
}

Json to_json(const Mat2& m) {
  Json rows = Json::array();
  for (int i = 0; i < 2; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 2; ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const qcore::KrausSet& k) {
  Json ops = Json::array();
  for (const auto& op : k.operators) ops.push_back(to_json(op));
  return Json{{"operators", ops}, {"weights", k.eigenvalues}};
}

Json to_json(const qcore::ChannelImages& images) {
  Json out = Json::array();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.push_back(to_json(images.at(i, j)));
  return out;
}

std::string fingerprint(const Json& doc) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : doc.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

Json provenance(const RunInfo& info) {
  return Json{{"version", kVersion},
              {"config_fingerprint", fingerprint(info.config)},
              {"seed", info.seed},
              {"fast", info.fast},
              {"timestamp", info.timestamp},
              {"config", info.config}};
}

double ghz(double rad_per_ns) { return rad_per_ns / kTwoPi; }

Json rotation_json(const control::RotationChannel& r) {
  return Json{{"model", control::to_string(r.model)},
              {"approx_error", r.approx_error},
              {"gate_time_ns", r.gate_time},
              {"omega_s_GHz", ghz(r.omega_s)},
              {"cp_defect", r.cp_defect},
              {"kraus", to_json(r.kraus)}};
}

Json cavity_block(const memory::CavityResult& c) {
  const auto& I = c.integrals.integrals;
  Json warnings = Json::array();
  for (const auto& w : c.warnings) warnings.push_back(w);
  return Json{{"omega0_offset_GHz", ghz(c.omega0 - c.omega_1A)},
           {"omega_c_offset_GHz", ghz(c.omega_c - c.omega_1A)},
           {"kappa_GHz", ghz(c.kappa)},
           {"F_sp", c.spin_photon.fidelity},
           {"eta_sp", c.spin_photon.success},
           {"start_fidelity", c.start_fidelity},
           {"evaluations", c.evaluations},
           {"cooperativities", {{"C_1A", c.cooperativities[0]},
                                {"C_2A", c.cooperativities[1]},
                                {"C_1B", c.cooperativities[2]},
                                {"C_2B", c.cooperativities[3]},
                                {"convention", "2|g|^2/(kappa gamma); the alternative |g|^2/(2 kappa gamma) is 1/4 of this"}}},
           {"integrals", {{"I1", I.I1}, {"I2", {I.I2.real(), I.I2.imag()}}, {"I3", I.I3},
                          {"source", memory::to_string(c.integrals.used)}}},
           {"warnings", warnings}};
}

}  // namespace

Json cavity_json(const memory::CavityResult& c, const RunInfo& info) {
  return Json{{"provenance", provenance(info)}, {"cavity", cavity_block(c)}};
}

Json kraus_json(const memory::Report& r, const RunInfo& info) {
  return Json{{"provenance", provenance(info)},
              {"rotation", rotation_json(r.rotation)},
              {"kraus_readin", to_json(r.readin.kraus)},
              {"kraus_readout", to_json(r.readout.kraus)}};
}

Json report_json(const memory::Report& r, const RunInfo& info) {
  auto stage = [](const resources::StageTiming& s) {
    return Json{{"T_tb_s", s.T_tb}, {"T_g_s", s.T_g}, {"T_m_s", s.T_m}, {"T_c_s", s.T_c}, {"total_s", s.total()}};
  };
  Json doc{{"provenance", provenance(info)},
           {"cavity", cavity_block(r.cavity)},
           {"rotation", rotation_json(r.rotation)},
           {"kraus_readin", to_json(r.readin.kraus)},
           {"kraus_readout", to_json(r.readout.kraus)},
           {"readin_images", to_json(r.readin.images)},
           {"readin_minus_images", to_json(r.readin.minus_images)},
           {"readout_images", to_json(r.readout.images)},
           {"stored_state", to_json(Mat2(r.stored.state.matrix()))},
           {"retrieved_state", to_json(Mat2(r.retrieved.state.matrix()))},
           {"fidelities", {{"F_sp", r.cavity.spin_photon.fidelity},
                           {"stored", r.stored_fidelity},
                           {"round_trip", r.round_trip_fidelity},
                           {"readout_from_one", r.readout_fidelity}}},
           {"success_probabilities", {{"store", r.stored.probability},
                                      {"retrieve", r.retrieved.probability},
                                      {"combined", r.success_probability}}},
           {"approx_errors", {{"rotation", r.rotation.approx_error}}},
           {"powers", {{"laser_1_W", r.powers.laser_1},
                       {"laser_2_W", r.powers.laser_2},
                       {"microwave_W", r.powers.microwave},
                       {"lambda_mw_m", r.powers.lambda_mw},
                       {"omega_s_GHz", ghz(r.powers.omega_s)}}},
           {"timing", {{"readin", stage(r.timing.readin)},
                       {"readout", stage(r.timing.readout)},
                       {"T_s_s", r.timing.T_s},
                       {"T1_s", r.timing.total}}}};
  return doc;
}

void require_finite(const Json& doc, const std::string& path) {
  if (doc.is_number_float() && !std::isfinite(doc.get<double>()))
    throw std::runtime_error("non-finite value at " + (path.empty() ? std::string("<root>") : path));
  if (doc.is_object())
    for (const auto& [k, v] : doc.items()) require_finite(v, path.empty() ? k : path + "." + k);
  if (doc.is_array())
    for (std::size_t i = 0; i < doc.size(); ++i) require_finite(doc[i], path + "[" + std::to_string(i) + "]");
}

}  // namespace g4vmem::io
