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

namespace g4vmem::photon {

void PhotonSourceSpec::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("photon.gamma must be positive");
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
    throw std::invalid_argument("photon amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
  if (!(fidelity > 0.5 && fidelity <= 1.0))
    throw std::invalid_argument("photon.fidelity must lie in (0.5, 1]");
}

Eigen::Vector2cd PhotonSourceSpec::ket() const { return {alpha, beta}; }

SpectralAmplitude::SpectralAmplitude(double omega0, double gamma)
    : omega0_(omega0), gamma_(gamma), norm_(std::sqrt(gamma / (2.0 * std::numbers::pi))) {
  if (!(gamma > 0.0)) throw std::invalid_argument("spectral bandwidth must be positive");
}

cplx SpectralAmplitude::operator()(double omega) const {
  return norm_ / cplx(gamma_ / 2.0, omega - omega0_);
}

double SpectralAmplitude::intensity(double omega) const {
  const double d = omega - omega0_;
  return norm_ * norm_ / (d * d + 0.25 * gamma_ * gamma_);
}

SpectralAmplitude lorentzian_spectrum(const PhotonSourceSpec& spec) {
  return SpectralAmplitude(spec.omega0, spec.gamma);
}

qcore::DensityState depolarize(const qcore::DensityState& rho, double fidelity) {
  if (rho.dim() != 2) throw std::invalid_argument("depolarize expects a qubit state");
  if (!(fidelity > 0.5 && fidelity <= 1.0))
    throw std::invalid_argument("depolarize: fidelity must lie in (0.5, 1]");
  const double eps = 2.0 * (1.0 - fidelity);
  const CMatrix out =
      (1.0 - eps) * rho.matrix() + eps * rho.trace() * 0.5 * CMatrix::Identity(2, 2);
  return qcore::DensityState::unnormalized(out);
}

cplx input_mode(double t, double omega0, double gamma, double e0) {
  return e0 * std::exp(cplx(-0.5 * gamma * t, omega0 * t));
}

}  // namespace g4vmem::photon
