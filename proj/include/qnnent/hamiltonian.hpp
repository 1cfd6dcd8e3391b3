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
#include <stdexcept>

#include "qnnent/operators.hpp"

namespace qnnent {

// Hamiltonian coefficients, all in rad/ns (hbar = 1; time in ns).
struct HamiltonianParams {
  double k_a = 0;    // tunneling, qubit A (sigma_x term)
  double k_b = 0;    // tunneling, qubit B
  double eps_a = 0;  // bias, qubit A (sigma_z term)
  double eps_b = 0;  // bias, qubit B
  double zeta = 0;   // qubit-qubit coupling (sigma_z x sigma_z term)

  bool finite() const {
    return std::isfinite(k_a) && std::isfinite(k_b) && std::isfinite(eps_a) &&
           std::isfinite(eps_b) && std::isfinite(zeta);
  }
};

// H = K_A sxA + K_B sxB + eps_A szA + eps_B szB + 2 zeta szsz.
// The coupling enters with an explicit factor 2: the pair sum runs over
// ordered pairs (A,B) and (B,A) with equal couplings.
inline Mat4 build_hamiltonian(const HamiltonianParams& p) {
  if (!p.finite()) throw std::invalid_argument("Hamiltonian parameters must be finite");
  return p.k_a * sigma_x_a() + p.k_b * sigma_x_b() + p.eps_a * sigma_z_a() +
         p.eps_b * sigma_z_b() + (2.0 * p.zeta) * sigma_zz();
}

// Uniform time grid; the schedule is piecewise constant over each step.
struct TimeGrid {
  double dt = 0.8;    // ns
  int n_steps = 317;

  void validate() const {
    if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (n_steps < 1) throw std::invalid_argument("n_steps must be at least 1");
  }

  double t_final() const { return dt * n_steps; }
  // Midpoint of step k; schedules and fits are sampled here.
  double t_mid(int k) const { return (k + 0.5) * dt; }
};

}  // namespace qnnent
