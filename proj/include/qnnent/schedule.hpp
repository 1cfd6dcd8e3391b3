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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qnnent/errors.hpp"
#include "qnnent/hamiltonian.hpp"

namespace qnnent {

// Column indices into ParameterSchedule::values.
enum ScheduleColumn { kColKA = 0, kColKB = 1, kColEpsA = 2, kColEpsB = 3, kColZeta = 4 };

// Per-step Hamiltonian parameters: the trainable "weights" of the network.
// When tie_k is set the K_A and K_B columns are kept exactly equal (same for
// tie_eps), reflecting the A<->B symmetry of the training problem.
struct ParameterSchedule {
  Eigen::Matrix<double, Eigen::Dynamic, 5> values;  // n_steps x (K_A, K_B, eps_A, eps_B, zeta)
  bool tie_k = true;
  bool tie_eps = true;

  int n_steps() const { return static_cast<int>(values.rows()); }

  HamiltonianParams params_at(int step) const {
    return {values(step, kColKA), values(step, kColKB), values(step, kColEpsA),
            values(step, kColEpsB), values(step, kColZeta)};
  }

  // Copies the A columns of tied pairs onto the B columns.
  void apply_ties() {
    if (tie_k) values.col(kColKB) = values.col(kColKA);
    if (tie_eps) values.col(kColEpsB) = values.col(kColEpsA);
  }

  void validate() const {
    if (!values.allFinite()) throw std::invalid_argument("schedule has non-finite entries");
    if (tie_k && values.col(kColKA) != values.col(kColKB))
      throw std::invalid_argument("tie_k set but K columns differ");
    if (tie_eps && values.col(kColEpsA) != values.col(kColEpsB))
      throw std::invalid_argument("tie_eps set but eps columns differ");
  }

  static ParameterSchedule constant(int n_steps, double k, double eps, double zeta,
                                    bool tie_k = true, bool tie_eps = true) {
    ParameterSchedule s;
    s.values.resize(n_steps, 5);
    s.values.col(kColKA).setConstant(k);
    s.values.col(kColKB).setConstant(k);
    s.values.col(kColEpsA).setConstant(eps);
    s.values.col(kColEpsB).setConstant(eps);
    s.values.col(kColZeta).setConstant(zeta);
    s.tie_k = tie_k;
    s.tie_eps = tie_eps;
    return s;
  }

  static ParameterSchedule zero(int n_steps) { return constant(n_steps, 0, 0, 0); }
};

namespace detail {

inline std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline void write_schedule_csv(std::ostream& os, const ParameterSchedule& s, const TimeGrid& grid) {
  os << "step,t_mid,K_A,K_B,eps_A,eps_B,zeta\n";
  for (int k = 0; k < s.n_steps(); ++k) {
    os << k << ',' << detail::format_g17(grid.t_mid(k));
    for (int c = 0; c < 5; ++c) os << ',' << detail::format_g17(s.values(k, c));
    os << '\n';
  }
}

inline void write_schedule_csv(const std::string& path, const ParameterSchedule& s,
                               const TimeGrid& grid) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_schedule_csv(f, s, grid);
}

// Reads a schedule CSV; the grid is reconstructed from the t_mid column.
inline std::pair<ParameterSchedule, TimeGrid> read_schedule_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("step,t_mid,", 0) != 0)
    throw std::runtime_error("schedule CSV missing header");
  std::vector<std::array<double, 6>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::array<double, 7> vals{};
    for (int c = 0; c < 7; ++c) {
      if (!std::getline(ss, cell, ',')) throw std::runtime_error("short row in schedule CSV");
      vals[c] = std::stod(cell);
    }
    rows.push_back({vals[1], vals[2], vals[3], vals[4], vals[5], vals[6]});
  }
  if (rows.empty()) throw std::runtime_error("schedule CSV has no rows");
  TimeGrid grid;
  grid.dt = 2.0 * rows[0][0];  // first midpoint is dt/2
  grid.n_steps = static_cast<int>(rows.size());
  grid.validate();
  ParameterSchedule s;
  s.values.resize(grid.n_steps, 5);
  for (int k = 0; k < grid.n_steps; ++k)
    for (int c = 0; c < 5; ++c) s.values(k, c) = rows[k][c + 1];
  s.tie_k = s.values.col(kColKA) == s.values.col(kColKB);
  s.tie_eps = s.values.col(kColEpsA) == s.values.col(kColEpsB);
  return {s, grid};
}

inline std::pair<ParameterSchedule, TimeGrid> read_schedule_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_schedule_csv(f);
}

}  // namespace qnnent
