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

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qnnent/entanglement.hpp"
#include "qnnent/evolve.hpp"
#include "qnnent/fourier.hpp"
#include "qnnent/schedule.hpp"

namespace qnnent {

// One supervised pair: prepared initial state and the target for the final
// correlation measurement.
struct TrainingSample {
  PureState initial;
  double target = 0;
};

// The four-state training set: Bell -> 1, Flat -> 0, C -> 0, P -> 0.44.
inline std::vector<TrainingSample> default_training_set() {
  PureState c;
  c << 0.0, 0.0, 0.5, 1.0;
  c /= std::sqrt(1.25);
  PureState p;
  p << 1.0, 1.0, 1.0, 0.0;
  p /= std::sqrt(3.0);
  return {{bell_state(), 1.0}, {flat_state(), 0.0}, {c, 0.0}, {p, 0.44}};
}

// Constant-schedule initialization scales; each column gets one uniform
// +-jitter factor so the initial functions stay constant in time.
struct InitSpec {
  double k = 2.5e-3;     // rad/ns
  double eps = 1e-4;
  double zeta = 1e-4;
  double jitter = 0.1;
};

struct TrainingConfig {
  double learning_rate = 5e-4;
  int max_epochs = 500;
  double stop_rms = 1e-3;
  TimeGrid grid{};
  bool tie_k = true;
  bool tie_eps = true;
  InitSpec init{};
  std::optional<NoiseSpec> noise;

  void validate() const {
    if (!(learning_rate > 0)) throw std::invalid_argument("learning_rate must be positive");
    if (max_epochs < 1) throw std::invalid_argument("max_epochs must be at least 1");
    if (stop_rms < 0) throw std::invalid_argument("stop_rms must be nonnegative");
    grid.validate();
    if (noise && noise->amplitude < 0)
      throw std::invalid_argument("noise amplitude must be nonnegative");
  }
};

struct EpochRecord {
  int epoch = 0;
  double rms_error = 0;               // sqrt(mean over samples of (output - target)^2)
  std::vector<double> outputs;        // per-sample outputs, training-set order
};

class TrainingDivergedError : public std::runtime_error {
 public:
  explicit TrainingDivergedError(std::vector<EpochRecord> history)
      : std::runtime_error("training diverged"), history(std::move(history)) {}
  std::vector<EpochRecord> history;
};

struct TrainingResult {
  ParameterSchedule schedule;
  std::vector<EpochRecord> history;
};

struct ForwardResult {
  double output = 0;
  std::vector<DensityMatrix> trajectory;
};

// One forward pass: propagate the sample state through the schedule (with the
// optional per-step noise channel) and measure the squared correlation.
inline ForwardResult forward(const TrainingSample& sample, const ParameterSchedule& schedule,
                             const TimeGrid& grid,
                             const std::optional<NoiseSpec>& noise = std::nullopt,
                             RandomSource* rng = nullptr) {
  validate_pure_state(sample.initial, 1e-9);
  auto traj = propagate(to_density(sample.initial), schedule, grid, noise, rng);
  const double out = output_correlation(traj.back());
  return {out, std::move(traj)};
}

using ScheduleGradient = Eigen::Matrix<double, Eigen::Dynamic, 5>;

namespace detail {

inline const std::array<Mat4, 5>& parameter_generators() {
  static const std::array<Mat4, 5> gens = {sigma_x_a(), sigma_x_b(), sigma_z_a(),
                                           sigma_z_b(), Mat4(2.0 * sigma_zz())};
  return gens;
}

// Backward costate sweep over the recorded trajectory. Exact gradient of
// L = (T^2 - target)^2 with T = Tr[rho(t_f) Z] for the discrete dynamics:
// the observable Z is pulled back step by step, and each step's parameter
// derivative comes from the Frechet derivative of U = exp(-i H dt) in the
// generator direction (divided-difference form over the eigenbasis of H).
// Any noise in the trajectory is treated as a constant (straight-through).
inline ScheduleGradient adjoint_sweep(const std::vector<DensityMatrix>& trajectory,
                                      const std::vector<StepEig>& steps, double dt,
                                      double target) {
  const int n = static_cast<int>(steps.size());
  const double t_corr = correlation_trace(trajectory[static_cast<size_t>(n)]);
  const double dl_dt = 4.0 * t_corr * (t_corr * t_corr - target);

  ScheduleGradient grad(n, 5);
  const auto& gens = parameter_generators();

  Mat4 costate = sigma_zz();  // observable pulled back from t_f
  for (int k = n - 1; k >= 0; --k) {
    const StepEig& se = steps[static_cast<size_t>(k)];
    const Mat4 u = se.unitary(dt);

    // divided differences of f(x) = exp(-i x dt) over the step's spectrum
    Vec4 f;
    for (int i = 0; i < kDim; ++i) {
      const double a = se.evals(i) * dt;
      f(i) = Complex(std::cos(a), -std::sin(a));
    }
    Mat4 dd;
    for (int i = 0; i < kDim; ++i) {
      for (int j = 0; j < kDim; ++j) {
        const double gap = se.evals(i) - se.evals(j);
        dd(i, j) = std::abs(gap) > 1e-13 ? (f(i) - f(j)) / gap : Complex(0, -dt) * f(i);
      }
    }

    const Mat4 rho_u = trajectory[static_cast<size_t>(k)] * u.adjoint();
    for (int m = 0; m < 5; ++m) {
      const Mat4 w = se.evecs.adjoint() * gens[static_cast<size_t>(m)] * se.evecs;
      const Mat4 du = se.evecs * dd.cwiseProduct(w) * se.evecs.adjoint();
      const Complex tr = (costate * du * rho_u).trace();
      grad(k, m) = dl_dt * 2.0 * tr.real();
    }
    costate = u.adjoint() * costate * u;
  }
  return grad;
}

inline double& param_by_column(HamiltonianParams& p, int col) {
  switch (col) {
    case kColKA: return p.k_a;
    case kColKB: return p.k_b;
    case kColEpsA: return p.eps_a;
    case kColEpsB: return p.eps_b;
    default: return p.zeta;
  }
}

// Sums tied column pairs and writes the sum into both columns, so a gradient
// update preserves ties exactly.
inline void reduce_ties(ScheduleGradient& grad, bool tie_k, bool tie_eps) {
  if (tie_k) {
    grad.col(kColKA) += grad.col(kColKB);
    grad.col(kColKB) = grad.col(kColKA);
  }
  if (tie_eps) {
    grad.col(kColEpsA) += grad.col(kColEpsB);
    grad.col(kColEpsB) = grad.col(kColEpsA);
  }
}

}  // namespace detail

// Gradient of L = (output - target)^2 with respect to every per-step
// parameter, via one forward trajectory plus one backward costate sweep.
// Cost is O(n_steps), independent of the parameter count.
inline ScheduleGradient adjoint_gradient(const TrainingSample& sample,
                                         const ParameterSchedule& schedule,
                                         const TimeGrid& grid) {
  grid.validate();
  if (schedule.n_steps() != grid.n_steps)
    throw std::invalid_argument("schedule length does not match grid");
  const auto steps = schedule_eigensteps(schedule);
  const auto fwd = forward(sample, schedule, grid);
  ScheduleGradient grad = detail::adjoint_sweep(fwd.trajectory, steps, grid.dt, sample.target);
  detail::reduce_ties(grad, schedule.tie_k, schedule.tie_eps);
  return grad;
}

// Central-difference gradient of the same loss; the verification oracle for
// adjoint_gradient. Tied pairs are perturbed jointly, so the tied entries
// carry the summed derivative just as the adjoint does.
inline ScheduleGradient fd_gradient(const TrainingSample& sample,
                                    const ParameterSchedule& schedule, const TimeGrid& grid,
                                    double h = 1e-5) {
  if (!(h > 0)) throw std::invalid_argument("fd step must be positive");
  grid.validate();
  if (schedule.n_steps() != grid.n_steps)
    throw std::invalid_argument("schedule length does not match grid");

  const DensityMatrix rho0 = to_density(sample.initial);
  std::vector<Mat4> base_us = schedule_unitaries(schedule, grid);

  // loss with step k's unitary replaced
  const auto loss_with = [&](int k, const Mat4& u_k) {
    DensityMatrix rho = rho0;
    for (int s = 0; s < grid.n_steps; ++s) {
      const Mat4& u = (s == k) ? u_k : base_us[static_cast<size_t>(s)];
      rho = u * rho * u.adjoint();
    }
    const double d = output_correlation(rho) - sample.target;
    return d * d;
  };

  // columns perturbed together per group; one group per independent parameter
  std::vector<std::vector<int>> groups;
  if (schedule.tie_k)
    groups.push_back({kColKA, kColKB});
  else {
    groups.push_back({kColKA});
    groups.push_back({kColKB});
  }
  if (schedule.tie_eps)
    groups.push_back({kColEpsA, kColEpsB});
  else {
    groups.push_back({kColEpsA});
    groups.push_back({kColEpsB});
  }
  groups.push_back({kColZeta});

  ScheduleGradient grad = ScheduleGradient::Zero(grid.n_steps, 5);
  for (int k = 0; k < grid.n_steps; ++k) {
    for (const auto& group : groups) {
      HamiltonianParams plus = schedule.params_at(k);
      HamiltonianParams minus = plus;
      for (int col : group) {
        detail::param_by_column(plus, col) += h;
        detail::param_by_column(minus, col) -= h;
      }
      const double lp = loss_with(k, step_unitary(build_hamiltonian(plus), grid.dt));
      const double lm = loss_with(k, step_unitary(build_hamiltonian(minus), grid.dt));
      const double g = (lp - lm) / (2.0 * h);
      for (int col : group) grad(k, col) = g;
    }
  }
  return grad;
}

// Batch gradient descent on the summed per-sample losses. Noise draws (when
// configured) are fresh each epoch from per-sample streams split off the
// master source; the adjoint treats them as constants. Stops at max_epochs or
// once the epoch rms reaches stop_rms; sustained blow-up past ten times the
// initial rms raises TrainingDivergedError carrying the history.
inline TrainingResult train(const std::vector<TrainingSample>& set, const TrainingConfig& config,
                            RandomSource& rng) {
  config.validate();
  if (set.empty()) throw std::invalid_argument("training set is empty");
  const int n = config.grid.n_steps;

  RandomSource init_rng = rng.split(0);
  const double jk = 1.0 + config.init.jitter * init_rng.uniform_symmetric();
  const double je = 1.0 + config.init.jitter * init_rng.uniform_symmetric();
  const double jz = 1.0 + config.init.jitter * init_rng.uniform_symmetric();
  ParameterSchedule schedule =
      ParameterSchedule::constant(n, config.init.k * jk, config.init.eps * je,
                                  config.init.zeta * jz, config.tie_k, config.tie_eps);

  std::vector<RandomSource> sample_rngs;
  for (std::size_t i = 0; i < set.size(); ++i) sample_rngs.push_back(rng.split(1 + i));

  std::vector<EpochRecord> history;
  history.reserve(static_cast<size_t>(config.max_epochs));
  int over_initial = 0;

  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    const auto steps = schedule_eigensteps(schedule);
    ScheduleGradient grad = ScheduleGradient::Zero(n, 5);
    EpochRecord rec;
    rec.epoch = epoch;
    double sq_sum = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      RandomSource* noise_rng = config.noise ? &sample_rngs[i] : nullptr;
      const auto fwd = forward(set[i], schedule, config.grid, config.noise, noise_rng);
      rec.outputs.push_back(fwd.output);
      const double err = fwd.output - set[i].target;
      sq_sum += err * err;
      grad += detail::adjoint_sweep(fwd.trajectory, steps, config.grid.dt, set[i].target);
    }
    rec.rms_error = std::sqrt(sq_sum / static_cast<double>(set.size()));
    history.push_back(rec);

    if (rec.rms_error > 10.0 * history.front().rms_error) {
      if (++over_initial >= 10) throw TrainingDivergedError(std::move(history));
    } else {
      over_initial = 0;
    }
    if (rec.rms_error <= config.stop_rms) break;

    detail::reduce_ties(grad, config.tie_k, config.tie_eps);
    schedule.values -= config.learning_rate * grad;
    schedule.apply_ties();
  }
  return {std::move(schedule), std::move(history)};
}

// The trained indicator: samples the fitted parameter functions onto the
// grid, propagates the (possibly mixed) input state, and returns the squared
// final-time correlation — an estimate of the input's initial entanglement.
inline double evaluate_indicator(const DensityMatrix& state, const ScheduleFits& fits,
                                 const TimeGrid& grid,
                                 const std::optional<NoiseSpec>& noise = std::nullopt,
                                 RandomSource* rng = nullptr) {
  validate_density_matrix(state, 1e-9);
  const ParameterSchedule schedule = sample_to_schedule(fits, grid);
  return output_correlation(propagate(state, schedule, grid, noise, rng).back());
}

}  // namespace qnnent
