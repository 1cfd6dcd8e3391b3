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
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qnnent/hamiltonian.hpp"
#include "qnnent/noise.hpp"
#include "qnnent/schedule.hpp"
#include "qnnent/states.hpp"

namespace qnnent {

// Eigendecomposition of one step's Hamiltonian. The step propagator is exact
// for the piecewise-constant schedule: U = V exp(-i lambda dt) V^dag.
struct StepEig {
  Eigen::Vector4d evals;
  Mat4 evecs;

  Mat4 unitary(double dt) const {
    Vec4 phases;
    for (int i = 0; i < kDim; ++i) {
      const double a = evals(i) * dt;
      phases(i) = Complex(std::cos(a), -std::sin(a));
    }
    return evecs * phases.asDiagonal() * evecs.adjoint();
  }
};

inline StepEig eigendecompose(const Mat4& h) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

inline Mat4 step_unitary(const Mat4& h, double dt) { return eigendecompose(h).unitary(dt); }

// One exact unitary step: U rho U^dag with U = exp(-i H dt).
inline DensityMatrix step_evolve(const DensityMatrix& rho, const Mat4& h, double dt) {
  if (!(dt > 0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!h.allFinite()) throw std::invalid_argument("Hamiltonian must be finite");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("Hamiltonian must be Hermitian");
  const Mat4 u = step_unitary(h, dt);
  return u * rho * u.adjoint();
}

inline std::vector<StepEig> schedule_eigensteps(const ParameterSchedule& schedule) {
  std::vector<StepEig> steps;
  steps.reserve(schedule.n_steps());
  for (int k = 0; k < schedule.n_steps(); ++k)
    steps.push_back(eigendecompose(build_hamiltonian(schedule.params_at(k))));
  return steps;
}

inline std::vector<Mat4> schedule_unitaries(const ParameterSchedule& schedule,
                                            const TimeGrid& grid) {
  std::vector<Mat4> us;
  us.reserve(schedule.n_steps());
  for (int k = 0; k < schedule.n_steps(); ++k)
    us.push_back(step_unitary(build_hamiltonian(schedule.params_at(k)), grid.dt));
  return us;
}

// Full trajectory, length n_steps + 1; entry k is the state after k steps.
// Each step applies the unitary for that step's parameters, then (when a
// noise spec is given) the perturbation channel and physicality projection.
inline std::vector<DensityMatrix> propagate(const DensityMatrix& rho0,
                                            const ParameterSchedule& schedule,
                                            const TimeGrid& grid,
                                            const std::optional<NoiseSpec>& noise = std::nullopt,
                                            RandomSource* rng = nullptr) {
  grid.validate();
  if (schedule.n_steps() != grid.n_steps)
    throw std::invalid_argument("schedule length does not match grid");
  if (noise && rng == nullptr)
    throw std::invalid_argument("noisy propagation needs a random source");

  std::vector<DensityMatrix> traj;
  traj.reserve(grid.n_steps + 1);
  traj.push_back(rho0);
  DensityMatrix rho = rho0;
  for (int k = 0; k < grid.n_steps; ++k) {
    const Mat4 u = step_unitary(build_hamiltonian(schedule.params_at(k)), grid.dt);
    rho = u * rho * u.adjoint();
    if (noise) rho = apply_noise(rho, *noise, *rng);
    traj.push_back(rho);
  }
  return traj;
}

// (Tr[rho sigma_z x sigma_z])^2, the trained output observable; in [0, 1].
inline double output_correlation(const DensityMatrix& rho) {
  const Complex t = (rho * sigma_zz()).trace();
  if (std::abs(t.imag()) > 1e-10)
    throw InvalidStateError("correlation trace has a large imaginary part");
  return t.real() * t.real();
}

// Signed correlation Tr[rho sigma_z x sigma_z]; the observable before squaring.
inline double correlation_trace(const DensityMatrix& rho) {
  return (rho * sigma_zz()).trace().real();
}

}  // namespace qnnent
