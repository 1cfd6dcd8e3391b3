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

#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "qnnent/errors.hpp"
#include "qnnent/operators.hpp"

namespace qnnent {

// A two-qubit pure state: amplitudes in the (00, 01, 10, 11) basis.
using PureState = Vec4;

// A two-qubit density matrix: Hermitian, PSD, unit trace (see validate_density_matrix).
using DensityMatrix = Mat4;

inline constexpr double kStateTol = 1e-12;

inline bool is_normalized(const PureState& psi, double tol = kStateTol) {
  return std::abs(psi.squaredNorm() - 1.0) <= tol;
}

inline void validate_pure_state(const PureState& psi, double tol = kStateTol) {
  if (!psi.allFinite()) throw InvalidStateError("pure state has non-finite amplitudes");
  if (!is_normalized(psi, tol)) throw InvalidStateError("pure state is not normalized");
}

inline DensityMatrix to_density(const PureState& psi) { return psi * psi.adjoint(); }

inline double hermiticity_defect(const DensityMatrix& rho) {
  return (rho - rho.adjoint()).cwiseAbs().maxCoeff();
}

inline double min_eigenvalue(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (rho + rho.adjoint()));
  return es.eigenvalues().minCoeff();
}

inline bool is_physical_density(const DensityMatrix& rho, double tol = kStateTol) {
  if (!rho.allFinite()) return false;
  if (hermiticity_defect(rho) > tol) return false;
  if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
    return false;
  return min_eigenvalue(rho) >= -tol;
}

inline void validate_density_matrix(const DensityMatrix& rho, double tol = kStateTol) {
  if (!rho.allFinite()) throw InvalidStateError("density matrix has non-finite entries");
  if (hermiticity_defect(rho) > tol) throw InvalidStateError("density matrix is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
    throw InvalidStateError("density matrix trace differs from one");
  if (min_eigenvalue(rho) < -tol)
    throw InvalidStateError("density matrix is not positive semidefinite");
}

// (|00> + |11>)/sqrt(2)
inline PureState bell_state() {
  PureState psi;
  psi << 1, 0, 0, 1;
  return psi / std::sqrt(2.0);
}

// (|00> + |01> + |10> + |11>)/2
inline PureState flat_state() {
  PureState psi;
  psi << 1, 1, 1, 1;
  return psi / 2.0;
}

// --- JSON serialization: [re, im] pairs, row-major in basis order ---

inline nlohmann::json density_to_json(const DensityMatrix& rho) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < kDim; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < kDim; ++j)
      row.push_back({rho(i, j).real(), rho(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

// Parses and verifies the density-matrix invariants. `tol` is loosened from
// kStateTol because serialized text round-trips through decimal.
inline DensityMatrix density_from_json(const nlohmann::json& j, double tol = 1e-9) {
  if (!j.is_array() || j.size() != kDim)
    throw InvalidStateError("density matrix JSON must be a 4x4 array");
  DensityMatrix rho;
  for (int i = 0; i < kDim; ++i) {
    const auto& row = j.at(i);
    if (!row.is_array() || row.size() != kDim)
      throw InvalidStateError("density matrix JSON must be a 4x4 array");
    for (int jj = 0; jj < kDim; ++jj) {
      const auto& cell = row.at(jj);
      if (!cell.is_array() || cell.size() != 2)
        throw InvalidStateError("density matrix entries must be [re, im] pairs");
      rho(i, jj) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
    }
  }
  validate_density_matrix(rho, tol);
  return rho;
}

inline nlohmann::json pure_to_json(const PureState& psi) {
  nlohmann::json amps = nlohmann::json::array();
  for (int i = 0; i < kDim; ++i) amps.push_back({psi(i).real(), psi(i).imag()});
  return amps;
}

inline PureState pure_from_json(const nlohmann::json& j, double tol = 1e-9) {
  if (!j.is_array() || j.size() != kDim)
    throw InvalidStateError("pure state JSON must be a length-4 array");
  PureState psi;
  for (int i = 0; i < kDim; ++i) {
    const auto& cell = j.at(i);
    if (!cell.is_array() || cell.size() != 2)
      throw InvalidStateError("pure state entries must be [re, im] pairs");
    psi(i) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
  }
  validate_pure_state(psi, tol);
  return psi;
}

}  // namespace qnnent
