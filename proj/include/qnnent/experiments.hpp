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

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qnnent/config.hpp"
#include "qnnent/entanglement.hpp"
#include "qnnent/training.hpp"

namespace qnnent {

// One row of a state-family sweep: the family parameter (gamma or delta), the
// seed-averaged indicator, and the entanglement-of-formation reference values.
struct SweepResult {
  double param = 0;
  double qnn_output = 0;
  double eof_clean = 0;        // E_F of the clean input state
  double eof_noisy_mean = 0;   // mean E_F of the propagated (noisy) final state
  double eof_noisy_stderr = 0;
  int n_seeds = 1;
};

enum class StateFamily { kP, kM };

inline StateFamily family_from_string(const std::string& s) {
  if (s == "P" || s == "p") return StateFamily::kP;
  if (s == "M" || s == "m") return StateFamily::kM;
  throw ConfigError("unknown state family: " + s + " (expected P or M)");
}

struct SweepSpec {
  StateFamily family = StateFamily::kP;
  ScheduleFits fits;
  std::optional<NoiseSpec> noise;
  double lo = 0;
  double hi = 4;
  int n_points = 31;
  int n_seeds = 32;
  TimeGrid grid{};
};

namespace detail {

inline void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::runtime_error(std::string("non-finite value in ") + what);
}

inline double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double stddev_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline double stderr_of(const std::vector<double>& v, double mean) {
  return stddev_of(v, mean) / std::sqrt(static_cast<double>(v.size()));
}

}  // namespace detail

inline DensityMatrix sweep_state(StateFamily family, double param) {
  return family == StateFamily::kP ? to_density(make_p_state(param)) : make_m_state(param);
}

// Sweeps the chosen state family, evaluating the fitted-function indicator
// (seed-averaged when a noise spec is given) together with the Wootters
// reference values. Rows come out sorted by the sweep parameter.
inline std::vector<SweepResult> run_sweep_state(const SweepSpec& spec) {
  if (spec.n_points < 1) throw ConfigError("sweep needs at least one point");
  if (spec.hi < spec.lo) throw ConfigError("sweep range is not well-ordered");
  if (spec.noise && spec.n_seeds < 1) throw ConfigError("noisy sweep needs at least one seed");
  spec.grid.validate();

  const ParameterSchedule schedule = sample_to_schedule(spec.fits, spec.grid);
  RandomSource base(spec.noise ? spec.noise->seed : 0);

  std::vector<SweepResult> rows;
  rows.reserve(static_cast<size_t>(spec.n_points));
  for (int i = 0; i < spec.n_points; ++i) {
    const double v = spec.n_points == 1
                         ? spec.lo
                         : spec.lo + (spec.hi - spec.lo) * i / (spec.n_points - 1);
    const DensityMatrix rho0 = sweep_state(spec.family, v);

    SweepResult row;
    row.param = v;
    row.eof_clean = entanglement_of_formation(rho0);
    if (spec.noise) {
      std::vector<double> outs, eofs;
      for (int s = 0; s < spec.n_seeds; ++s) {
        RandomSource rng =
            base.split(static_cast<std::uint64_t>(i) * spec.n_seeds + static_cast<std::uint64_t>(s));
        const auto traj = propagate(rho0, schedule, spec.grid, spec.noise, &rng);
        outs.push_back(output_correlation(traj.back()));
        eofs.push_back(entanglement_of_formation(traj.back()));
      }
      row.qnn_output = detail::mean_of(outs);
      row.eof_noisy_mean = detail::mean_of(eofs);
      row.eof_noisy_stderr = detail::stderr_of(eofs, row.eof_noisy_mean);
      row.n_seeds = spec.n_seeds;
    } else {
      const auto traj = propagate(rho0, schedule, spec.grid);
      row.qnn_output = output_correlation(traj.back());
      row.eof_noisy_mean = entanglement_of_formation(traj.back());
      row.eof_noisy_stderr = 0;
      row.n_seeds = 1;
    }
    detail::check_finite(row.qnn_output, "sweep output");
    detail::check_finite(row.eof_noisy_mean, "sweep eof");
    rows.push_back(row);
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepResult>& rows) {
  os << "param,qnn_output,eof_clean,eof_noisy_mean,eof_noisy_stderr,n_seeds\n";
  for (const auto& r : rows) {
    os << detail::format_g17(r.param) << ',' << detail::format_g17(r.qnn_output) << ','
       << detail::format_g17(r.eof_clean) << ',' << detail::format_g17(r.eof_noisy_mean) << ','
       << detail::format_g17(r.eof_noisy_stderr) << ',' << r.n_seeds << '\n';
  }
}

// --- run manifests -----------------------------------------------------

// Every command writes a manifest sidecar with the complete configuration and
// seed; re-running with those settings reproduces the CSV outputs byte for
// byte (wall time is informational only).
inline void write_manifest(const std::string& path, const std::string& command,
                           const nlohmann::json& params, std::uint64_t seed,
                           const std::vector<std::string>& outputs, double wall_ms) {
  nlohmann::json j;
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = params;
  j["outputs"] = outputs;
  j["wall_time_ms"] = wall_ms;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << j.dump(2) << '\n';
}

class WallClock {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

// --- train command ------------------------------------------------------

struct TrainArtifacts {
  TrainingResult result;
  ScheduleFits fits;
};

inline ScheduleFits fit_trained_schedule(const ParameterSchedule& schedule, const TimeGrid& grid,
                                         int order_k, int order_eps, int order_zeta) {
  ScheduleFits fits;
  fits.k = fit_fourier(schedule.values.col(kColKA), grid, order_k);
  fits.eps = fit_fourier(schedule.values.col(kColEpsA), grid, order_eps);
  fits.zeta = fit_fourier(schedule.values.col(kColZeta), grid, order_zeta);
  return fits;
}

inline void write_history_csv(std::ostream& os, const std::vector<EpochRecord>& history) {
  os << "epoch,rms,out_bell,out_flat,out_c,out_p\n";
  for (const auto& rec : history) {
    os << rec.epoch << ',' << detail::format_g17(rec.rms_error);
    for (double o : rec.outputs) os << ',' << detail::format_g17(o);
    os << '\n';
  }
}

// Trains on the four-state set, fits the parameter functions, and writes
// history.csv, schedule.csv, fits.json and manifest.json into out_dir.
inline TrainArtifacts run_train(const RunConfig& cfg, const std::string& out_dir) {
  WallClock clock;
  std::filesystem::create_directories(out_dir);

  RandomSource rng(cfg.seed);
  TrainArtifacts art;
  art.result = train(default_training_set(), cfg.training, rng);
  art.fits = fit_trained_schedule(art.result.schedule, cfg.training.grid, cfg.fit_order_k,
                                  cfg.fit_order_eps, cfg.fit_order_zeta);

  const auto p = [&](const char* name) { return (std::filesystem::path(out_dir) / name).string(); };
  {
    std::ofstream f(p("history.csv"));
    write_history_csv(f, art.result.history);
  }
  write_schedule_csv(p("schedule.csv"), art.result.schedule, cfg.training.grid);
  {
    std::ofstream f(p("fits.json"));
    f << fits_to_json(art.fits).dump(2) << '\n';
  }
  write_manifest(p("manifest.json"), "train", run_config_to_json(cfg), cfg.seed,
                 {"history.csv", "schedule.csv", "fits.json"}, clock.elapsed_ms());
  return art;
}

// --- fourier-vs-noise command -------------------------------------------

struct FourierVsNoiseRow {
  double amplitude = 0;
  std::string parameter;    // K | eps | zeta
  std::string coefficient;  // a0 a1 b1 a2 b2 omega rms_residual
  double mean = 0;
  double stddev = 0;
  int n_seeds = 1;
};

// Trains at each noise amplitude (seeds_per_point replicas) and tabulates the
// fitted coefficients of every parameter function.
inline std::vector<FourierVsNoiseRow> run_fourier_vs_noise(NoiseKind kind,
                                                           std::vector<double> amplitudes,
                                                           int seeds_per_point,
                                                           const RunConfig& base) {
  if (seeds_per_point < 1) throw ConfigError("need at least one seed per point");
  for (double a : amplitudes)
    if (a < 0 || !std::isfinite(a)) throw ConfigError("noise amplitudes must be nonnegative");
  std::sort(amplitudes.begin(), amplitudes.end());

  RandomSource master(base.seed);
  std::vector<FourierVsNoiseRow> rows;
  const char* coeff_names[] = {"a0", "a1", "b1", "a2", "b2", "omega", "rms_residual"};
  const char* param_names[] = {"K", "eps", "zeta"};

  for (std::size_t ai = 0; ai < amplitudes.size(); ++ai) {
    // per (parameter, coefficient) accumulation over seeds
    std::vector<std::vector<double>> values(3 * 7);
    for (int s = 0; s < seeds_per_point; ++s) {
      RunConfig cfg = base;
      NoiseSpec spec;
      spec.kind = kind;
      spec.amplitude = amplitudes[ai];
      cfg.training.noise = spec;
      RandomSource rng = master.split(ai * static_cast<std::size_t>(seeds_per_point) + s);
      const auto result = train(default_training_set(), cfg.training, rng);
      const auto fits = fit_trained_schedule(result.schedule, cfg.training.grid, cfg.fit_order_k,
                                             cfg.fit_order_eps, cfg.fit_order_zeta);
      const FourierFit* per_param[] = {&fits.k, &fits.eps, &fits.zeta};
      for (int pi = 0; pi < 3; ++pi) {
        const FourierFit& f = *per_param[pi];
        const double coeffs[] = {f.a0, f.a1, f.b1, f.a2, f.b2, f.omega, f.rms_residual};
        for (int ci = 0; ci < 7; ++ci) values[pi * 7 + ci].push_back(coeffs[ci]);
      }
    }
    for (int pi = 0; pi < 3; ++pi) {
      for (int ci = 0; ci < 7; ++ci) {
        const auto& v = values[pi * 7 + ci];
        FourierVsNoiseRow row;
        row.amplitude = amplitudes[ai];
        row.parameter = param_names[pi];
        row.coefficient = coeff_names[ci];
        row.mean = detail::mean_of(v);
        row.stddev = detail::stddev_of(v, row.mean);
        row.n_seeds = seeds_per_point;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

inline void write_fourier_vs_noise_csv(std::ostream& os,
                                       const std::vector<FourierVsNoiseRow>& rows) {
  os << "amplitude,parameter,coefficient,mean,stddev,n_seeds\n";
  for (const auto& r : rows) {
    os << detail::format_g17(r.amplitude) << ',' << r.parameter << ',' << r.coefficient << ','
       << detail::format_g17(r.mean) << ',' << detail::format_g17(r.stddev) << ',' << r.n_seeds
       << '\n';
  }
}

// --- randomize-coefficient command ---------------------------------------

struct RandomizeTrialRow {
  int trial = 0;
  double mean_abs_error = 0;
  double max_abs_error = 0;
};

enum class RandomizeTarget { kK, kEps, kZeta, kKOmega, kEpsOmega, kZetaOmega };

inline RandomizeTarget randomize_target_from_string(const std::string& s) {
  if (s == "K") return RandomizeTarget::kK;
  if (s == "eps") return RandomizeTarget::kEps;
  if (s == "zeta") return RandomizeTarget::kZeta;
  if (s == "K-omega") return RandomizeTarget::kKOmega;
  if (s == "eps-omega") return RandomizeTarget::kEpsOmega;
  if (s == "zeta-omega") return RandomizeTarget::kZetaOmega;
  throw ConfigError("unknown randomize target: " + s);
}

// The fixed comparison battery: training states plus slices of both families.
inline std::vector<DensityMatrix> indicator_test_battery() {
  std::vector<DensityMatrix> states;
  for (const auto& s : default_training_set()) states.push_back(to_density(s.initial));
  for (double g : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0}) states.push_back(to_density(make_p_state(g)));
  for (double d : {0.0, 1.0, 2.0, 5.0, 10.0}) states.push_back(make_m_state(d));
  return states;
}

namespace detail {

// Replaces each amplitude coefficient with one of matching order of magnitude
// (scale within sqrt(10) either way, random sign).
inline void randomize_amplitudes(FourierFit& f, RandomSource& rng) {
  double* coeffs[] = {&f.a0, &f.a1, &f.b1, &f.a2, &f.b2};
  const int active = f.order >= 2 ? 5 : 3;
  for (int i = 0; i < active; ++i) {
    const double mag = std::abs(*coeffs[i]);
    if (mag == 0.0) continue;
    const double scale = std::pow(10.0, 0.5 * rng.uniform_symmetric());
    const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    *coeffs[i] = sign * mag * scale;
  }
}

inline void randomize_omega(FourierFit& f, RandomSource& rng) {
  f.omega *= std::pow(10.0, 0.5 * rng.uniform_symmetric());
}

}  // namespace detail

// Re-tests the indicator with one parameter function's coefficients (or its
// frequency) replaced by random values of the right order of magnitude.
inline std::vector<RandomizeTrialRow> run_randomize_coeff(const ScheduleFits& fits,
                                                          RandomizeTarget target, int trials,
                                                          std::uint64_t seed,
                                                          const TimeGrid& grid) {
  if (trials < 0) throw ConfigError("trials must be nonnegative");
  const auto battery = indicator_test_battery();
  std::vector<double> baseline;
  for (const auto& rho : battery) baseline.push_back(evaluate_indicator(rho, fits, grid));

  RandomSource master(seed);
  std::vector<RandomizeTrialRow> rows;
  for (int t = 0; t < trials; ++t) {
    RandomSource rng = master.split(static_cast<std::uint64_t>(t));
    ScheduleFits mod = fits;
    switch (target) {
      case RandomizeTarget::kK: detail::randomize_amplitudes(mod.k, rng); break;
      case RandomizeTarget::kEps: detail::randomize_amplitudes(mod.eps, rng); break;
      case RandomizeTarget::kZeta: detail::randomize_amplitudes(mod.zeta, rng); break;
      case RandomizeTarget::kKOmega: detail::randomize_omega(mod.k, rng); break;
      case RandomizeTarget::kEpsOmega: detail::randomize_omega(mod.eps, rng); break;
      case RandomizeTarget::kZetaOmega: detail::randomize_omega(mod.zeta, rng); break;
    }
    RandomizeTrialRow row;
    row.trial = t;
    double sum = 0, worst = 0;
    for (std::size_t i = 0; i < battery.size(); ++i) {
      const double e = std::abs(evaluate_indicator(battery[i], mod, grid) - baseline[i]);
      sum += e;
      worst = std::max(worst, e);
    }
    row.mean_abs_error = sum / static_cast<double>(battery.size());
    row.max_abs_error = worst;
    rows.push_back(row);
  }
  return rows;
}

inline void write_randomize_csv(std::ostream& os, const std::vector<RandomizeTrialRow>& rows) {
  os << "trial,mean_abs_error,max_abs_error\n";
  for (const auto& r : rows)
    os << r.trial << ',' << detail::format_g17(r.mean_abs_error) << ','
       << detail::format_g17(r.max_abs_error) << '\n';
}

}  // namespace qnnent
