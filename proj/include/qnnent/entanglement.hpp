// Copyright 2026 The qnnent Authors
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

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "qnnent/errors.hpp"
#include "qnnent/noise.hpp"
#include "qnnent/states.hpp"

namespace qnnent {

struct EntanglementReport {
  double concurrence = 0;
  double eof = 0;  // entanglement of formation, ebits
};

namespace detail {

// States that drift slightly outside the PSD cone (noise dust) are projected
// back before analysis; anything worse is rejected.
inline DensityMatrix sanitize_for_analysis(const DensityMatrix& rho) {
  if (is_physical_density(rho, 1e-12)) return rho;
  if (!rho.allFinite() || hermiticity_defect(rho) > 1e-8 ||
      std::abs(rho.trace().real() - 1.0) > 1e-8 || min_eigenvalue(rho) < -1e-8)
    throw InvalidStateError("matrix is too far from a physical density matrix");
  return project_physical(rho);
}

inline Mat4 matrix_sqrt_psd(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(m);
  Eigen::Vector4d lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

// Concurrence of an arbitrary two-qubit state: with the spin-flipped matrix
// rho~ = (sy x sy) rho* (sy x sy) and lambda_i the decreasing square roots of
// the eigenvalues of rho rho~, C = max(0, l1 - l2 - l3 - l4). The spectrum is
// taken from the Hermitian equivalent sqrt(rho) rho~ sqrt(rho), which keeps
// the eigenvalues real and nonnegative near rank deficiency.
inline double concurrence(const DensityMatrix& rho_in) {
  const DensityMatrix rho = detail::sanitize_for_analysis(rho_in);
  const Mat4 flipped = sigma_yy() * rho.conjugate() * sigma_yy();
  const Mat4 root = detail::matrix_sqrt_psd(rho);
  Eigen::SelfAdjointEigenSolver<Mat4> es(root * flipped * root);
  Eigen::Vector4d lam = es.eigenvalues();
  // clamp eigenvalue dust before the square roots
  for (int i = 0; i < kDim; ++i) lam(i) = lam(i) < 1e-12 ? 0.0 : lam(i);
  Eigen::Vector4d l = lam.cwiseSqrt();
  std::sort(l.data(), l.data() + kDim, std::greater<double>());
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

inline double eof_from_concurrence(double c) {
  c = std::clamp(c, 0.0, 1.0);
  const double x = 0.5 * (1.0 + std::sqrt(1.0 - c * c));
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -(x * std::log2(x) + (1.0 - x) * std::log2(1.0 - x));
}

inline double entanglement_of_formation(const DensityMatrix& rho) {
  return eof_from_concurrence(concurrence(rho));
}

inline EntanglementReport analyze_entanglement(const DensityMatrix& rho) {
  const double c = concurrence(rho);
  return {c, eof_from_concurrence(c)};
}

// P(gamma) = (|00> + gamma |01> + |11>)/sqrt(2 + gamma^2). Bell at gamma = 0;
// entanglement falls off as gamma grows (C = 2/(2 + gamma^2)).
inline PureState make_p_state(double gamma) {
  if (!std::isfinite(gamma)) throw std::invalid_argument("gamma must be finite");
  PureState psi;
  psi << 1.0, gamma, 0.0, 1.0;
  return psi / std::sqrt(2.0 + gamma * gamma);
}

// M(delta) = (delta |11><11| + |Phi+><Phi+|)/(delta + 1), a rank-2 mixture.
inline DensityMatrix make_m_state(double delta) {
  if (!(delta >= 0) || !std::isfinite(delta))
    throw std::invalid_argument("delta must be nonnegative");
  PureState eleven;
  eleven << 0, 0, 0, 1;
  return (delta * to_density(eleven) + to_density(bell_state())) / (delta + 1.0);
}

}  // namespace qnnent
