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

#include <complex>

#include <Eigen/Dense>

namespace qnnent {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

// Basis order is fixed as (|00>, |01>, |10>, |11>), qubit A the left factor.
inline constexpr int kDim = 4;

inline Mat2 pauli_x() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

inline Mat2 pauli_y() {
  Mat2 m;
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

inline Mat2 pauli_z() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

inline Mat4 kron2(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

// Single-qubit Paulis embedded in the two-qubit space.
inline const Mat4& sigma_x_a() {
  static const Mat4 m = kron2(pauli_x(), Mat2::Identity());
  return m;
}

inline const Mat4& sigma_x_b() {
  static const Mat4 m = kron2(Mat2::Identity(), pauli_x());
  return m;
}

inline const Mat4& sigma_z_a() {
  static const Mat4 m = kron2(pauli_z(), Mat2::Identity());
  return m;
}

inline const Mat4& sigma_z_b() {
  static const Mat4 m = kron2(Mat2::Identity(), pauli_z());
  return m;
}

inline const Mat4& sigma_zz() {
  static const Mat4 m = kron2(pauli_z(), pauli_z());
  return m;
}

inline const Mat4& sigma_yy() {
  static const Mat4 m = kron2(pauli_y(), pauli_y());
  return m;
}

}  // namespace qnnent
