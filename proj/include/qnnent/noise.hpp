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
#include <cstdint>
#include <string>

#include <json.hpp>

#include "qnnent/errors.hpp"
#include "qnnent/random.hpp"
#include "qnnent/states.hpp"

namespace qnnent {

enum class NoiseKind { kMagnitude, kPhase, kComplex };
enum class NoiseDistribution { kGaussian, kUniform };

inline std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::kMagnitude: return "magnitude";
    case NoiseKind::kPhase: return "phase";
    case NoiseKind::kComplex: return "complex";
  }
  return "?";
}

inline NoiseKind noise_kind_from_string(const std::string& s) {
  if (s == "magnitude") return NoiseKind::kMagnitude;
  if (s == "phase") return NoiseKind::kPhase;
  if (s == "complex") return NoiseKind::kComplex;
  throw ConfigError("unknown noise kind: " + s);
}

// Per-timestep perturbation channel. `amplitude` is the rms of each added
// number (dimensionless for magnitude noise, radians for phase noise);
// amplitude 0 makes the channel the identity. Draws are Gaussian by default;
// a zero-mean uniform with the same rms is kept behind the distribution
// switch.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::kMagnitude;
  double amplitude = 0.0;
  std::uint64_t seed = 0;
  NoiseDistribution distribution = NoiseDistribution::kGaussian;
};

inline nlohmann::json noise_to_json(const NoiseSpec& n) {
  return {{"kind", to_string(n.kind)}, {"amplitude", n.amplitude}, {"seed", n.seed}};
}

inline NoiseSpec noise_from_json(const nlohmann::json& j) {
  NoiseSpec n;
  n.kind = noise_kind_from_string(j.at("kind").get<std::string>());
  n.amplitude = j.at("amplitude").get<double>();
  n.seed = j.at("seed").get<std::uint64_t>();
  if (n.amplitude < 0) throw ConfigError("noise amplitude must be nonnegative");
  return n;
}

// One zero-mean draw with rms = amplitude.
inline double noise_draw(RandomSource& rng, double amplitude, NoiseDistribution dist) {
  if (dist == NoiseDistribution::kUniform)
    return amplitude * std::sqrt(3.0) * rng.uniform_symmetric();
  return amplitude * rng.normal();
}

// Restores Hermiticity, positivity and unit trace: hermitize, clamp negative
// eigenvalues to zero, renormalize the trace.
inline DensityMatrix project_physical(const Mat4& m) {
  if (!m.allFinite()) throw InvalidStateError("cannot project a non-finite matrix");
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (m + m.adjoint()));
  Eigen::Vector4d lam = es.eigenvalues().cwiseMax(0.0);
  const double tr = lam.sum();
  if (tr <= 1e-9) throw DegenerateStateError("no probability mass left after projection");
  lam /= tr;
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

// Raw (pre-projection) magnitude perturbation. Draw order is fixed for
// determinism: upper triangle row-major, real part first, imaginary part
// (off-diagonal only) second. The conjugate mirror keeps Hermiticity.
inline void add_magnitude_noise(Mat4& rho, double amplitude, RandomSource& rng,
                                NoiseDistribution dist = NoiseDistribution::kGaussian) {
  for (int i = 0; i < kDim; ++i) {
    for (int j = i; j < kDim; ++j) {
      const double re = noise_draw(rng, amplitude, dist);
      if (i == j) {
        rho(i, i) += re;
      } else {
        const double im = noise_draw(rng, amplitude, dist);
        rho(i, j) += Complex(re, im);
        rho(j, i) += Complex(re, -im);
      }
    }
  }
}

// Raw (pre-projection) phase perturbation: rotates each strict-upper-triangle
// element by a random angle, mirrors the conjugate, leaves diagonals (and all
// magnitudes) unchanged.
inline void apply_phase_noise(Mat4& rho, double amplitude, RandomSource& rng,
                              NoiseDistribution dist = NoiseDistribution::kGaussian) {
  for (int i = 0; i < kDim; ++i) {
    for (int j = i + 1; j < kDim; ++j) {
      const double theta = noise_draw(rng, amplitude, dist);
      rho(i, j) *= Complex(std::cos(theta), std::sin(theta));
      rho(j, i) = std::conj(rho(i, j));
    }
  }
}

inline DensityMatrix perturb_magnitude(const DensityMatrix& rho, double amplitude,
                                       RandomSource& rng,
                                       NoiseDistribution dist = NoiseDistribution::kGaussian) {
  if (amplitude < 0) throw std::invalid_argument("noise amplitude must be nonnegative");
  Mat4 out = rho;
  add_magnitude_noise(out, amplitude, rng, dist);
  return project_physical(out);
}

inline DensityMatrix perturb_phase(const DensityMatrix& rho, double amplitude,
                                   RandomSource& rng,
                                   NoiseDistribution dist = NoiseDistribution::kGaussian) {
  if (amplitude < 0) throw std::invalid_argument("noise amplitude must be nonnegative");
  Mat4 out = rho;
  apply_phase_noise(out, amplitude, rng, dist);
  return project_physical(out);
}

// Phase then magnitude with the same amplitude; the trailing projection comes
// from the magnitude stage.
inline DensityMatrix perturb_complex(const DensityMatrix& rho, double amplitude,
                                     RandomSource& rng,
                                     NoiseDistribution dist = NoiseDistribution::kGaussian) {
  return perturb_magnitude(perturb_phase(rho, amplitude, rng, dist), amplitude, rng, dist);
}

inline DensityMatrix apply_noise(const DensityMatrix& rho, const NoiseSpec& spec,
                                 RandomSource& rng) {
  switch (spec.kind) {
    case NoiseKind::kMagnitude: return perturb_magnitude(rho, spec.amplitude, rng, spec.distribution);
    case NoiseKind::kPhase: return perturb_phase(rho, spec.amplitude, rng, spec.distribution);
    case NoiseKind::kComplex: return perturb_complex(rho, spec.amplitude, rng, spec.distribution);
  }
  throw std::invalid_argument("unknown noise kind");
}

}  // namespace qnnent
