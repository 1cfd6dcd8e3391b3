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
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <json.hpp>

#include "qnnent/errors.hpp"
#include "qnnent/hamiltonian.hpp"
#include "qnnent/schedule.hpp"

namespace qnnent {

// Truncated Fourier series f(t) = a0 + a1 cos(wt) + b1 sin(wt)
//                               + a2 cos(2wt) + b2 sin(2wt).
// Order-1 fits carry a2 = b2 = 0.
struct FourierFit {
  double a0 = 0, a1 = 0, b1 = 0, a2 = 0, b2 = 0;
  double omega = 1.0;  // base angular frequency, rad/ns
  int order = 1;
  double rms_residual = 0;
};

inline double evaluate_fourier(const FourierFit& f, double t) {
  double v = f.a0 + f.a1 * std::cos(f.omega * t) + f.b1 * std::sin(f.omega * t);
  if (f.order >= 2)
    v += f.a2 * std::cos(2.0 * f.omega * t) + f.b2 * std::sin(2.0 * f.omega * t);
  return v;
}

namespace detail {

inline Eigen::MatrixXd fourier_design(const Eigen::VectorXd& ts, double omega, int order) {
  const int n = static_cast<int>(ts.size());
  Eigen::MatrixXd a(n, 1 + 2 * order);
  a.col(0).setOnes();
  a.col(1) = (omega * ts.array()).cos();
  a.col(2) = (omega * ts.array()).sin();
  if (order >= 2) {
    a.col(3) = (2.0 * omega * ts.array()).cos();
    a.col(4) = (2.0 * omega * ts.array()).sin();
  }
  return a;
}

// Least-squares residual at a fixed frequency; the fit is linear given omega.
inline double fourier_residual(const Eigen::VectorXd& ts, const Eigen::VectorXd& col,
                               double omega, int order, Eigen::VectorXd* coeffs = nullptr) {
  const Eigen::MatrixXd a = fourier_design(ts, omega, order);
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(col);
  if (coeffs) *coeffs = c;
  return std::sqrt((col - a * c).squaredNorm() / static_cast<double>(col.size()));
}

}  // namespace detail

// Least-squares fit of the series to per-step values sampled at step
// midpoints. The frequency is found by a 2000-point scan of
// [0.25 * 2pi/t_f, 2pi/(4 dt)] followed by golden-section refinement.
inline FourierFit fit_fourier(const Eigen::VectorXd& column, const TimeGrid& grid, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("fit order must be 1 or 2");
  if (column.size() < 6) throw InsufficientDataError("need at least 6 samples to fit");
  if (static_cast<int>(column.size()) != grid.n_steps)
    throw std::invalid_argument("column length does not match grid");
  grid.validate();

  Eigen::VectorXd ts(grid.n_steps);
  for (int k = 0; k < grid.n_steps; ++k) ts(k) = grid.t_mid(k);

  const double w_lo = 0.25 * 2.0 * std::numbers::pi / grid.t_final();
  const double w_hi = 2.0 * std::numbers::pi / (4.0 * grid.dt);
  constexpr int kScanPoints = 2000;

  double best_w = w_lo, best_r = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < kScanPoints; ++i) {
    const double w = w_lo + (w_hi - w_lo) * i / (kScanPoints - 1);
    const double r = detail::fourier_residual(ts, column, w, order);
    if (r < best_r) {
      best_r = r;
      best_w = w;
      best_i = i;
    }
  }

  // golden-section refinement inside the bracketing grid interval
  const double step = (w_hi - w_lo) / (kScanPoints - 1);
  double a = std::max(w_lo, best_w - step);
  double b = std::min(w_hi, best_w + step);
  constexpr double kGolden = 0.6180339887498949;
  double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
  double f1 = detail::fourier_residual(ts, column, x1, order);
  double f2 = detail::fourier_residual(ts, column, x2, order);
  for (int it = 0; it < 90 && (b - a) > 1e-15 * std::max(1.0, b); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = detail::fourier_residual(ts, column, x1, order);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = detail::fourier_residual(ts, column, x2, order);
    }
  }
  const double w_ref = 0.5 * (a + b);

  Eigen::VectorXd c;
  const double r_ref = detail::fourier_residual(ts, column, w_ref, order, &c);
  FourierFit fit;
  if (r_ref <= best_r) {
    fit.omega = w_ref;
    fit.rms_residual = r_ref;
  } else {
    fit.omega = best_w;
    fit.rms_residual = detail::fourier_residual(ts, column, best_w, order, &c);
  }
  fit.order = order;
  fit.a0 = c(0);
  fit.a1 = c(1);
  fit.b1 = c(2);
  if (order >= 2) {
    fit.a2 = c(3);
    fit.b2 = c(4);
  }
  return fit;
}

// The fitted parameter functions of one trained run.
struct ScheduleFits {
  FourierFit k;     // tunneling (shared by both qubits)
  FourierFit eps;   // bias (shared)
  FourierFit zeta;  // coupling
};

// Evaluates the fits at step midpoints; K and eps ties are applied.
inline ParameterSchedule sample_to_schedule(const ScheduleFits& fits, const TimeGrid& grid) {
  grid.validate();
  ParameterSchedule s;
  s.values.resize(grid.n_steps, 5);
  s.tie_k = true;
  s.tie_eps = true;
  for (int k = 0; k < grid.n_steps; ++k) {
    const double t = grid.t_mid(k);
    const double kk = evaluate_fourier(fits.k, t);
    const double ee = evaluate_fourier(fits.eps, t);
    s.values(k, kColKA) = kk;
    s.values(k, kColKB) = kk;
    s.values(k, kColEpsA) = ee;
    s.values(k, kColEpsB) = ee;
    s.values(k, kColZeta) = evaluate_fourier(fits.zeta, t);
  }
  return s;
}

inline nlohmann::json fourier_to_json(const FourierFit& f) {
  return {{"a0", f.a0},       {"a1", f.a1},
          {"b1", f.b1},       {"a2", f.a2},
          {"b2", f.b2},       {"omega", f.omega},
          {"rms_residual", f.rms_residual}};
}

inline FourierFit fourier_from_json(const nlohmann::json& j) {
  FourierFit f;
  f.a0 = j.at("a0").get<double>();
  f.a1 = j.at("a1").get<double>();
  f.b1 = j.at("b1").get<double>();
  f.a2 = j.at("a2").get<double>();
  f.b2 = j.at("b2").get<double>();
  f.omega = j.at("omega").get<double>();
  f.rms_residual = j.at("rms_residual").get<double>();
  f.order = (f.a2 != 0.0 || f.b2 != 0.0) ? 2 : 1;
  if (!(f.omega > 0)) throw ConfigError("fit omega must be positive");
  if (f.rms_residual < 0) throw ConfigError("fit residual must be nonnegative");
  return f;
}

inline nlohmann::json fits_to_json(const ScheduleFits& fits) {
  return {{"K", fourier_to_json(fits.k)},
          {"eps", fourier_to_json(fits.eps)},
          {"zeta", fourier_to_json(fits.zeta)}};
}

inline ScheduleFits fits_from_json(const nlohmann::json& j) {
  return {fourier_from_json(j.at("K")), fourier_from_json(j.at("eps")),
          fourier_from_json(j.at("zeta"))};
}

}  // namespace qnnent
