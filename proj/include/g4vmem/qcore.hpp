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

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace g4vmem {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

inline constexpr cplx kI{0.0, 1.0};

/// Raised when a numerical stage cannot produce a meaningful result
/// (degenerate branch, CP violation, solver failure).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace qcore {

inline constexpr double kTolHerm = 1e-9;
inline constexpr double kTolPsd = 1e-9;
inline constexpr double kTolTrace = 1e-12;
inline constexpr double kTolEig = 1e-10;

/// Density matrix of a (possibly sub-normalized) state. Construction checks
/// squareness, finiteness, Hermiticity, positivity and trace <= 1 + tol.
class DensityState {
 public:
  explicit DensityState(CMatrix m, double tol = kTolHerm);

  /// Skips the trace bound; still requires a Hermitian PSD matrix.
  static DensityState unnormalized(CMatrix m, double tol = kTolHerm);

  const CMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }
  double trace() const { return m_.trace().real(); }

 private:
  struct NoTraceCheck {};
  DensityState(CMatrix m, double tol, NoTraceCheck);
  CMatrix m_;
};

/// Images D(|i><j|) of the four qubit basis matrices, index 2*i + j (0-based).
struct ChannelImages {
  std::array<std::optional<Mat2>, 4> images;

  void set(int i, int j, const Mat2& m) { images[2 * i + j] = m; }
  const Mat2& at(int i, int j) const;
  bool complete() const;
};

/// Ordered Kraus operators (descending eigenvalue) of a trace-non-increasing
/// qubit channel together with the Choi eigenvalues they were built from.
struct KrausSet {
  std::vector<Mat2> operators;
  std::vector<double> eigenvalues;

  /// 1 - sum_m K_m^dagger K_m
  Mat2 completeness_defect() const;
  /// Smallest eigenvalue of the completeness defect.
  double completeness_margin() const;
  /// Images of the basis matrices under rho -> sum_m K_m rho K_m^dagger.
  ChannelImages images() const;
};

// Common operators.
Mat2 ry(double theta);
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
CMatrix basis_projector(Eigen::Index dim, Eigen::Index i, Eigen::Index j);
Mat2 pure(const Eigen::Vector2cd& psi);

bool is_hermitian(const CMatrix& m, double tol);
double min_eigenvalue(const CMatrix& hermitian);
CMatrix symmetrize(const CMatrix& m);

/// Max column sum of absolute values.
double one_norm(const CMatrix& m);

/// <Bell| rho |Bell> with |Bell> = (|1> + |2>)/sqrt 2; rho must be normalized.
double bell_fidelity(const DensityState& rho);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double mixed_fidelity(const DensityState& rho, const DensityState& sigma);

/// J = sum_ij D(|i><j|) (x) |i><j|, composite index 2*out + in.
Mat4 choi_matrix(const ChannelImages& images);

/// Kraus operators from the Choi eigendecomposition. Eigenvalues down to
/// -tol_eig * lambda_max are clamped to zero; anything more negative throws.
KrausSet kraus_from_choi(const Mat4& choi, double tol_eig = kTolEig);

DensityState apply_kraus(const KrausSet& kraus, const DensityState& rho);

struct Normalized {
  DensityState state;
  double probability;
};
Normalized normalize(const DensityState& rho, double tol_trace = kTolTrace);

/// Rescales by a unit phase so the largest-magnitude entry (first in
/// row-major order among ties) has zero imaginary and non-negative real part.
Mat2 apply_phase_convention(const Mat2& k);

/// min over phi of max_ij |a_ij - e^{i phi} b_ij| evaluated at the phase that
/// best aligns b onto a in the Frobenius sense.
double phase_aligned_distance(const Mat2& a, const Mat2& b);

}  // namespace qcore
}  // namespace g4vmem
