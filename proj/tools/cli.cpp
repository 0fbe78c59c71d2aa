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

#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "g4vmem/langevin.hpp"
#include "scenario_io.hpp"

namespace g4vmem::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Loaded {
  io::Json doc;
  io::ParsedScenario parsed;
};

Loaded load(const std::string& path, bool fast, const std::optional<std::uint64_t>& seed) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  Loaded l;
  try {
    l.doc = io::Json::parse(in);
  } catch (const io::Json::parse_error& e) {
    throw io::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path();
  l.parsed = io::parse_scenario(l.doc, dir.empty() ? "." : dir.string());
  io::apply_environment(l.parsed.scenario);
  if (fast) io::make_fast(l.parsed.scenario);
  if (seed) l.parsed.seed = *seed;
  return l;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

io::RunInfo info_for(const Loaded& l, bool fast) { return {l.doc, l.parsed.seed, fast, utc_now()}; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

void write_json(const std::string& path, const io::Json& doc) {
  io::require_finite(doc);
  write_text(path, doc.dump(2) + "\n");
}


io::Json synthetic_optimum(const memory::Scenario& s, const cavity::LevelStructure& levels) {
  const auto& c = s.cavity;
  const double w = levels.omega_1A;
  const std::array<double, 3> lo{w + c.omega0_offset[0], w + c.omega_c_offset[0], c.kappa[0]};
  const std::array<double, 3> hi{w + c.omega0_offset[1], w + c.omega_c_offset[1], c.kappa[1]};
  const std::array<double, 3> frac{0.3, 0.6, 0.25};
  std::array<double, 3> centre{};
  for (int i = 0; i < 3; ++i) centre[i] = lo[i] + frac[i] * (hi[i] - lo[i]);
  auto objective = [=](double a, double b, double k) {
    const std::array<double, 3> x{a, b, k};
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double d = (x[i] - centre[i]) / (hi[i] - lo[i]);
      acc += d * d;
    }
    return 1.0 - acc;
  };
  cavity::CavityBounds b{{lo[0], hi[0]}, {lo[1], hi[1]}, {lo[2], hi[2]}};
  const auto opt = cavity::optimize_cavity(b, s.photon, levels, s.cavity.geometry, s.optimizer, objective);
  return io::Json{{"omega0_offset_GHz", (opt.omega0 - w) / kTwoPi},
                  {"omega_c_offset_GHz", (opt.cavity.omega_c - w) / kTwoPi},
                  {"kappa_GHz", opt.cavity.kappa / kTwoPi},
                  {"value", opt.fidelity},
                  {"start_value", opt.start_fidelity},
                  {"evaluations", opt.evaluations},
                  {"known_optimum", {{"omega0_offset_GHz", (centre[0] - w) / kTwoPi},
                                     {"omega_c_offset_GHz", (centre[1] - w) / kTwoPi},
                                     {"kappa_GHz", centre[2] / kTwoPi},
                                     {"value", 1.0}}}};
}

std::string trajectory_csv(const memory::Scenario& s, int spin, bool uncoupled, long max_rows) {
  if (s.cavity.mode == memory::CavityMode::Ideal)
    throw io::ConfigError("cavity.mode: trajectory needs an optimized or fixed cavity");
  auto design = s;
  design.integrals = memory::IntegralsSource::Frequency;
  const auto c = memory::design_cavity(design);
  langevin::LangevinParams p;
  p.cav = cavity::make_cavity(cavity::snv_levels(s.cavity.levels), c.omega_c, c.kappa, s.cavity.geometry);
  if (uncoupled) p.cav.g_1A = p.cav.g_2B = p.cav.g_2A = p.cav.g_1B = 0.0;
  p.drive = s.photon;
  p.drive.omega0 = c.omega0;
  p.rtol = s.langevin_rtol;
  p.atol = s.langevin_atol;
  const auto tr = langevin::propagate_langevin(p, spin == 1 ? cavity::Spin::One : cavity::Spin::Two);
  const auto d = langevin::output_mode(tr, p);
  const auto in = langevin::input_mode(tr);
  std::ostringstream os;
  os << std::setprecision(12);
  os << "t_ns,abs_a_sq,p11,p22,pAA,pBB,abs_aout_sq,abs_ain_sq,abs_aout_over_ain\n";
  const std::size_t stride = std::max<std::size_t>(1, (tr.t.size() + max_rows - 1) / max_rows);
  for (std::size_t i = 0; i < tr.t.size(); i += stride) {
    const auto& y = tr.y[i];
    const double ain = std::abs(in[i]);
    os << tr.t[i] << ',' << std::norm(y[langevin::kA]) << ',' << y[langevin::kP11].real() << ','
       << y[langevin::kP22].real() << ',' << y[langevin::kPAA].real() << ',' << y[langevin::kPBB].real() << ','
       << std::norm(d[i]) << ',' << ain * ain << ',' << (ain > 0.0 ? std::abs(d[i]) / ain : 0.0) << '\n';
  }
  return os.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Storage and retrieval of time-bin photons in a cavity-coupled group-IV spin memory", "g4vmem"};
  app.require_subcommand(1);

  std::string config, out_path;
  bool fast = false, synthetic = false, uncoupled = false;
  std::optional<std::uint64_t> seed;
  int spin = 1;
  long max_rows = 5000;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "Scenario JSON")->required();
    sub->add_option("--out", out_path, "Output file")->required();
    sub->add_option("--seed", seed, "Override solver.seed");
  };
  auto* run_cmd = app.add_subcommand("run", "Full round trip; writes the report");
  common(run_cmd);
  run_cmd->add_flag("--fast", fast, "Frequency-domain integrals and a phenomenological rotation");
  auto* kraus_cmd = app.add_subcommand("kraus", "Channel Kraus sets only");
  common(kraus_cmd);
  kraus_cmd->add_flag("--fast", fast, "Frequency-domain integrals and a phenomenological rotation");
  auto* opt_cmd = app.add_subcommand("optimize-cavity", "Optimized cavity triple and F_sp only");
  common(opt_cmd);
  opt_cmd->add_flag("--synthetic", synthetic, "Optimize a synthetic landscape with a known optimum");
  auto* traj_cmd = app.add_subcommand("trajectory", "Langevin time series as CSV");
  common(traj_cmd);
  traj_cmd->add_option("--spin", spin, "Initial spin level")->check(CLI::IsMember({1, 2}));
  traj_cmd->add_flag("--uncoupled", uncoupled, "Switch the emitter-cavity couplings off");
  traj_cmd->add_option("--max-rows", max_rows, "Decimate the output to at most this many rows")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  std::string stage = "config";
  try {
    const auto l = load(config, fast, seed);
    const auto& s = l.parsed.scenario;
    stage = "pipeline";
    if (run_cmd->parsed()) {
      write_json(out_path, io::report_json(memory::round_trip(s), info_for(l, fast)));
    } else if (kraus_cmd->parsed()) {
      write_json(out_path, io::kraus_json(memory::round_trip(s), info_for(l, fast)));
    } else if (opt_cmd->parsed()) {
      if (synthetic) {
        io::Json doc{{"synthetic", synthetic_optimum(s, cavity::snv_levels(s.cavity.levels))}};
        write_json(out_path, doc);
      } else {
        write_json(out_path, io::cavity_json(memory::design_cavity(s), info_for(l, fast)));
      }
    } else if (traj_cmd->parsed()) {
      write_text(out_path, trajectory_csv(s, spin, uncoupled, max_rows));
    }
  } catch (const IoError& e) {
    err << "error [io]: " << e.what() << "\n";
    return kIoError;
  } catch (const memory::StageError& e) {
    err << "error [" << e.stage() << "]: " << e.detail() << "\n";
    return e.invalid_input() ? kConfigError : kNumericalError;
  } catch (const std::invalid_argument& e) {
    err << "error [" << stage << "]: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error [" << stage << "]: " << e.what() << "\n";
    return kNumericalError;
  }
  return kOk;
}

}  // namespace g4vmem::cli
