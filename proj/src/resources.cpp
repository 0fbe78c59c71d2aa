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

#include "g4vmem/resources.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "g4vmem/constants.hpp"

namespace g4vmem::resources {

double laser_power(double E, double lambda, double sigma, double n) {
  const double w = 0.5 * si::eps0 * E * E * std::pow(lambda, 3) / (2.0 * std::pow(n, 3));
  return w / (sigma * std::exp(0.5));
}

double microwave_wavelength(double omega_rad_per_ns) {
  if (!(omega_rad_per_ns > 0.0)) throw std::invalid_argument("microwave_wavelength: omega must be positive");
  return 2.0 * si::pi * si::c / (omega_rad_per_ns * 1e9);
}

double microwave_power(double B_ac, double lambda_mw, double n) {
  const double side = lambda_mw / (2.0 * n);
  return B_ac * B_ac / (2.0 * si::mu0) * side * side;
}

void TimingConfig::validate() const {
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string("timing.") + name + " must be finite and >= 0");
  };
  non_negative(T_g_readin, "T_g_readin");
  non_negative(T_g_readout, "T_g_readout");
  non_negative(T_m, "T_m");
  non_negative(T_s, "T_s");
  non_negative(L_readin, "L_readin");
  non_negative(L_readout, "L_readout");
  non_negative(time_bin_lifetimes, "time_bin_lifetimes");
  if (!(bandwidth_readin > 0.0) || !(bandwidth_readout > 0.0))
    throw std::invalid_argument("timing: bandwidths must be positive");
  if (!(c_fiber > 1e8 && c_fiber < 3e8)) throw std::invalid_argument("timing.c_fiber must lie in (1e8, 3e8) m/s");
}

Timing processing_time(const TimingConfig& cfg) {
  cfg.validate();
  auto stage = [&](double bw, double tg, double len) {
    StageTiming s;
    s.T_tb = std::isinf(bw) ? 0.0 : cfg.time_bin_lifetimes / bw;
    s.T_g = tg;
    s.T_m = cfg.T_m;
    s.T_c = len / cfg.c_fiber;
    return s;
  };
  Timing t;
  t.readin = stage(cfg.bandwidth_readin, cfg.T_g_readin, cfg.L_readin);
  t.readout = stage(cfg.bandwidth_readout, cfg.T_g_readout, cfg.L_readout);
  t.T_s = cfg.T_s;
  t.total = t.readin.total() + t.readout.total() + t.T_s;
  return t;
}

}  // namespace g4vmem::resources
