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

#include "g4vmem/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace g4vmem::qcore {

namespace {

void check_finite(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw std::invalid_argument("density matrix must be square and non-empty");
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag()))
      throw std::invalid_argument("density matrix has non-finite entries");
  }
}

double scale_of(const CMatrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

}  // namespace

DensityState::DensityState(CMatrix m, double tol, NoTraceCheck) : m_(std::move(m)) {
  check_finite(m_);
  if (!is_hermitian(m_, tol * scale_of(m_)))
    throw std::invalid_argument("density matrix is not Hermitian");
  m_ = symmetrize(m_);
  if (min_eigenvalue(m_) < -kTolPsd * scale_of(m_))
    throw std::invalid_argument("density matrix is not positive semidefinite");
}

DensityState::DensityState(CMatrix m, double tol) : DensityState(std::move(m), tol, NoTraceCheck{}) {
  if (trace() > 1.0 + 1e-9) throw std::invalid_argument("density matrix trace exceeds one");
}

DensityState DensityState::unnormalized(CMatrix m, double tol) {
  return DensityState(std::move(m), tol, NoTraceCheck{});
}

const Mat2& ChannelImages::at(int i, int j) const {
  const auto& img = images.at(2 * i + j);
  if (!img) throw std::invalid_argument("channel image missing for basis element (" +
                                        std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
  return *img;
}

bool ChannelImages::complete() const {
  return std::all_of(images.begin(), images.end(), [](const auto& m) { return m.has_value(); });
}

Mat2 KrausSet::completeness_defect() const {
  Mat2 sum = Mat2::Zero();
  for (const auto& k : operators) sum += k.adjoint() * k;
  return Mat2::Identity() - sum;
}

double KrausSet::completeness_margin() const { return min_eigenvalue(completeness_defect()); }

ChannelImages KrausSet::images() const {
  ChannelImages out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Mat2 acc = Mat2::Zero();
      for (const auto& k : operators) acc += k.col(i) * k.col(j).adjoint();
      out.set(i, j, acc);
    }
  }
  return out;
}

Mat2 ry(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

Mat2 pauli_x() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

Mat2 pauli_y() {
  Mat2 m;
  m << 0, -kI, kI, 0;
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

CMatrix basis_projector(Eigen::Index dim, Eigen::Index i, Eigen::Index j) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

Mat2 pure(const Eigen::Vector2cd& psi) { return psi * psi.adjoint(); }

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double min_eigenvalue(const CMatrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrize(hermitian), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CMatrix symmetrize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

double one_norm(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("one_norm expects a square matrix");
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

double bell_fidelity(const DensityState& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("bell_fidelity expects a qubit state");
  if (std::abs(rho.trace() - 1.0) > 1e-9)
    throw std::invalid_argument("bell_fidelity expects a normalized state");
  const Eigen::Vector2cd bell = Eigen::Vector2cd::Constant(1.0 / std::sqrt(2.0));
  const double f = (bell.adjoint() * rho.matrix() * bell)(0, 0).real();
  return std::clamp(f, 0.0, 1.0);
}

namespace {

// Eigenvalues within rounding noise of zero are set to zero before the square
// root, which would otherwise amplify 1e-17 noise to 1e-9.
Eigen::VectorXd clamp_noise(const Eigen::VectorXd& ev) {
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * ev.cwiseAbs().maxCoeff();
  return ev.unaryExpr([floor](double x) { return x > floor ? x : 0.0; });
}

CMatrix psd_sqrt(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrize(m));
  const Eigen::VectorXd ev = clamp_noise(es.eigenvalues()).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double mixed_fidelity(const DensityState& rho, const DensityState& sigma) {
  if (rho.dim() != sigma.dim()) throw std::invalid_argument("mixed_fidelity: dimension mismatch");
  const CMatrix sr = psd_sqrt(rho.matrix());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(symmetrize(sr * sigma.matrix() * sr),
                                            Eigen::EigenvaluesOnly);
  const double tr = clamp_noise(es.eigenvalues()).cwiseSqrt().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

Mat4 choi_matrix(const ChannelImages& images) {
  Mat4 j = Mat4::Zero();
  for (int in_i = 0; in_i < 2; ++in_i) {
    for (int in_j = 0; in_j < 2; ++in_j) {
      const Mat2& d = images.at(in_i, in_j);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) j(2 * a + in_i, 2 * b + in_j) = d(a, b);
    }
  }
  return j;
}

KrausSet kraus_from_choi(const Mat4& choi, double tol_eig) {
  if (!is_hermitian(choi, 1e-9 * std::max(1.0, choi.cwiseAbs().maxCoeff())))
    throw std::invalid_argument("Choi matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat4> es(Mat4(0.5 * (choi + choi.adjoint())));
  const Eigen::Vector4d& ev = es.eigenvalues();
  const double lmax = std::max(ev.maxCoeff(), 0.0);
  // Absolute slack covers roundoff when the channel is (nearly) zero.
  const double floor = -tol_eig * lmax - 1e-15;

  std::array<int, 4> order{};
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return ev(a) > ev(b); });

  KrausSet out;
  for (int idx : order) {
    double lambda = ev(idx);
    if (lambda < floor) {
      throw NumericalError("Choi matrix has eigenvalue " + std::to_string(lambda) +
                           " below the clamp threshold; channel is not completely positive");
    }
    lambda = std::max(lambda, 0.0);
    const Eigen::Vector4cd psi = es.eigenvectors().col(idx);
    Mat2 k;
    k << psi(0), psi(1), psi(2), psi(3);
    k *= std::sqrt(lambda);
    out.operators.push_back(apply_phase_convention(k));
    out.eigenvalues.push_back(lambda);
  }
  return out;
}

DensityState apply_kraus(const KrausSet& kraus, const DensityState& rho) {
  if (rho.dim() != 2) throw std::invalid_argument("apply_kraus: dimension mismatch");
  Mat2 acc = Mat2::Zero();
  for (const auto& k : kraus.operators) acc += k * rho.matrix() * k.adjoint();
  return DensityState::unnormalized(acc);
}

Normalized normalize(const DensityState& rho, double tol_trace) {
  const double tr = rho.trace();
  if (!(tr > tol_trace)) throw NumericalError("cannot normalize a state with vanishing trace");
  return {DensityState(rho.matrix() / tr), tr};
}

Mat2 apply_phase_convention(const Mat2& k) {
  const double mx = k.cwiseAbs().maxCoeff();
  if (mx == 0.0) return k;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      if (std::abs(k(r, c)) >= mx * (1.0 - 1e-6)) {
        const cplx phase = std::conj(k(r, c)) / std::abs(k(r, c));
        Mat2 out = k * phase;
        out(r, c) = std::abs(k(r, c));
        return out;
      }
    }
  }
  return k;
}

double phase_aligned_distance(const Mat2& a, const Mat2& b) {
  const cplx overlap = (b.adjoint() * a).trace();
  const cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0};
  return (a - phase * b).cwiseAbs().maxCoeff();
}

}  // namespace g4vmem::qcore
