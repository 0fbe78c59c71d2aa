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

#include <numbers>

#include "g4vmem/qcore.hpp"

// Time-bin photon source. Angular frequencies are in rad/ns, times in ns.
namespace g4vmem::photon {

struct PhotonSourceSpec {
  double omega0 = 0.0;  // central frequency (in whatever frame the caller uses)
  double gamma = 0.0;   // FWHM of the Lorentzian intensity, rad/ns
  cplx alpha{1.0 / std::numbers::sqrt2, 0.0};
  cplx beta{1.0 / std::numbers::sqrt2, 0.0};
  double fidelity = 1.0;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
  double epsilon() const { return 2.0 * (1.0 - fidelity); }
  /// Source lifetime 1/gamma, ns.
  double lifetime() const { return 1.0 / gamma; }
  /// alpha|e> + beta|l>
  Eigen::Vector2cd ket() const;
};

/// Normalized spectral amplitude S(w - w0) = N / (i (w - w0) + gamma/2).
class SpectralAmplitude {
 public:
  SpectralAmplitude(double omega0, double gamma);

  cplx operator()(double omega) const;
  /// |S(w - w0)|^2, a Lorentzian of FWHM gamma integrating to one.
  double intensity(double omega) const;
  double normalization() const { return norm_; }
  double omega0() const { return omega0_; }
  double gamma() const { return gamma_; }

 private:
  double omega0_;
  double gamma_;
  double norm_;
};

SpectralAmplitude lorentzian_spectrum(const PhotonSourceSpec& spec);

/// (1 - eps) rho + eps tr(rho) 1/2 with eps = 2 (1 - F), F in (0.5, 1].
qcore::DensityState depolarize(const qcore::DensityState& rho, double fidelity);

/// e0 exp((i w0 - gamma/2) t).
cplx input_mode(double t, double omega0, double gamma, double e0);
inline cplx input_mode(double t, const PhotonSourceSpec& spec, double e0) {
  return input_mode(t, spec.omega0, spec.gamma, e0);
}

}  // namespace g4vmem::photon
