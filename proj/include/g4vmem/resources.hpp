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

#pragma once

// Power and latency budgets. SI units throughout (W, V/m, m, s, T).
namespace g4vmem::resources {

/// P = W / (sigma sqrt(e)) with W = eps0 E^2 lambda^3 / (4 n^3).
double laser_power(double E, double lambda, double sigma, double n);

/// Vacuum wavelength 2 pi c / omega for omega in rad/ns.
double microwave_wavelength(double omega_rad_per_ns);

/// P = B_ac^2 / (2 mu0) (lambda_mw / 2n)^2
double microwave_power(double B_ac, double lambda_mw, double n);

struct TimingConfig {
  // Source bandwidths as ordinary frequencies (1/s); the source lifetime is 1/bandwidth.
  double bandwidth_readin = 1e9;
  double bandwidth_readout = 1e9;
  double T_g_readin = 0.0;
  double T_g_readout = 0.0;
  double T_m = 100e-12;
  double T_s = 0.0;
  double L_readin = 0.0;
  double L_readout = 0.0;
  double c_fiber = 2.0e8;
  double time_bin_lifetimes = 20.0;

  void validate() const;
};

struct StageTiming {
  double T_tb = 0.0;
  double T_g = 0.0;
  double T_m = 0.0;
  double T_c = 0.0;
  double total() const { return T_tb + T_g + T_m + T_c; }
};

struct Timing {
  StageTiming readin;
  StageTiming readout;
  double T_s = 0.0;
  double total = 0.0;
};

Timing processing_time(const TimingConfig& cfg);

}  // namespace g4vmem::resources
