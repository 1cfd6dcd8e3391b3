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

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qnnent/errors.hpp"
#include "qnnent/schedule.hpp"
#include "qnnent/training.hpp"

namespace qnnent {

// A full experiment run: the training setup, the master seed, and the Fourier
// orders used when fitting the trained parameter functions.
struct RunConfig {
  TrainingConfig training;
  std::uint64_t seed = 11;
  int fit_order_k = 2;
  int fit_order_eps = 1;
  int fit_order_zeta = 1;
};

namespace detail {

using IniSections = std::map<std::string, std::map<std::string, std::string>>;

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline IniSections parse_ini(std::istream& is) {
  IniSections sections;
  std::string line, current;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      current = trim(line.substr(1, line.size() - 2));
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!sections[current].emplace(key, value).second)
      throw ConfigError("duplicate key '" + key + "' in section [" + current + "]");
  }
  return sections;
}

inline double to_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
  }
}

inline std::uint64_t to_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const std::uint64_t u = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return u;
  } catch (const std::exception&) {
    throw ConfigError("bad integer value for " + key + ": '" + v + "'");
  }
}

inline bool to_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("bad boolean value for " + key + ": '" + v + "'");
}

// Pops a key from the section (so leftovers can be reported as unknown).
template <typename T, typename Fn>
inline T take(std::map<std::string, std::string>& sec, const std::string& key, T fallback,
               Fn convert) {
  auto it = sec.find(key);
  if (it == sec.end()) return fallback;
  const std::string v = it->second;
  sec.erase(it);
  return convert(v, key);
}

}  // namespace detail

inline RunConfig read_run_config(std::istream& is) {
  auto sections = detail::parse_ini(is);
  RunConfig cfg;

  const auto known = {"grid", "training", "init", "noise", "fit", ""};
  for (const auto& [name, _] : sections) {
    bool ok = false;
    for (const auto* k : known) ok = ok || name == k;
    if (!ok) throw ConfigError("unknown config section [" + name + "]");
  }
  if (sections.count("") && !sections[""].empty())
    throw ConfigError("keys outside any section: " + sections[""].begin()->first);

  auto& grid = sections["grid"];
  cfg.training.grid.dt = detail::take(grid, "dt", cfg.training.grid.dt, detail::to_double);
  cfg.training.grid.n_steps = static_cast<int>(
      detail::take(grid, "steps", std::uint64_t(cfg.training.grid.n_steps), detail::to_u64));

  auto& tr = sections["training"];
  cfg.training.learning_rate =
      detail::take(tr, "learning_rate", cfg.training.learning_rate, detail::to_double);
  cfg.training.max_epochs = static_cast<int>(
      detail::take(tr, "max_epochs", std::uint64_t(cfg.training.max_epochs), detail::to_u64));
  cfg.training.stop_rms = detail::take(tr, "stop_rms", cfg.training.stop_rms, detail::to_double);
  cfg.training.tie_k = detail::take(tr, "tie_k", cfg.training.tie_k, detail::to_bool);
  cfg.training.tie_eps = detail::take(tr, "tie_eps", cfg.training.tie_eps, detail::to_bool);
  cfg.seed = detail::take(tr, "seed", cfg.seed, detail::to_u64);

  auto& init = sections["init"];
  cfg.training.init.k = detail::take(init, "k", cfg.training.init.k, detail::to_double);
  cfg.training.init.eps = detail::take(init, "eps", cfg.training.init.eps, detail::to_double);
  cfg.training.init.zeta = detail::take(init, "zeta", cfg.training.init.zeta, detail::to_double);
  cfg.training.init.jitter =
      detail::take(init, "jitter", cfg.training.init.jitter, detail::to_double);

  if (auto it = sections.find("noise"); it != sections.end() && !it->second.empty()) {
    auto& nz = it->second;
    const std::string kind =
        detail::take(nz, "kind", std::string(), [](const std::string& v, const std::string&) {
          return v;
        });
    if (kind.empty()) throw ConfigError("[noise] section needs a kind");
    if (kind != "none") {
      NoiseSpec spec;
      spec.kind = noise_kind_from_string(kind);
      spec.amplitude = detail::take(nz, "amplitude", 0.0, detail::to_double);
      spec.seed = detail::take(nz, "seed", std::uint64_t(0), detail::to_u64);
      const std::string dist = detail::take(
          nz, "distribution", std::string("gaussian"),
          [](const std::string& v, const std::string&) { return v; });
      if (dist == "gaussian")
        spec.distribution = NoiseDistribution::kGaussian;
      else if (dist == "uniform")
        spec.distribution = NoiseDistribution::kUniform;
      else
        throw ConfigError("unknown noise distribution: " + dist);
      if (spec.amplitude < 0) throw ConfigError("noise amplitude must be nonnegative");
      cfg.training.noise = spec;
    } else {
      nz.erase("amplitude");
      nz.erase("seed");
      nz.erase("distribution");
    }
  }

  auto& fit = sections["fit"];
  cfg.fit_order_k =
      static_cast<int>(detail::take(fit, "order_k", std::uint64_t(cfg.fit_order_k), detail::to_u64));
  cfg.fit_order_eps = static_cast<int>(
      detail::take(fit, "order_eps", std::uint64_t(cfg.fit_order_eps), detail::to_u64));
  cfg.fit_order_zeta = static_cast<int>(
      detail::take(fit, "order_zeta", std::uint64_t(cfg.fit_order_zeta), detail::to_u64));

  for (const auto& [name, sec] : sections)
    if (!sec.empty())
      throw ConfigError("unknown key '" + sec.begin()->first + "' in section [" + name + "]");

  try {
    cfg.training.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if ((cfg.fit_order_k != 1 && cfg.fit_order_k != 2) ||
      (cfg.fit_order_eps != 1 && cfg.fit_order_eps != 2) ||
      (cfg.fit_order_zeta != 1 && cfg.fit_order_zeta != 2))
    throw ConfigError("fit orders must be 1 or 2");
  return cfg;
}

inline RunConfig read_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  return read_run_config(f);
}

inline void write_run_config(std::ostream& os, const RunConfig& cfg) {
  using detail::format_g17;
  os << "[grid]\n";
  os << "dt = " << format_g17(cfg.training.grid.dt) << "\n";
  os << "steps = " << cfg.training.grid.n_steps << "\n\n";
  os << "[training]\n";
  os << "learning_rate = " << format_g17(cfg.training.learning_rate) << "\n";
  os << "max_epochs = " << cfg.training.max_epochs << "\n";
  os << "stop_rms = " << format_g17(cfg.training.stop_rms) << "\n";
  os << "tie_k = " << (cfg.training.tie_k ? "true" : "false") << "\n";
  os << "tie_eps = " << (cfg.training.tie_eps ? "true" : "false") << "\n";
  os << "seed = " << cfg.seed << "\n\n";
  os << "[init]\n";
  os << "k = " << format_g17(cfg.training.init.k) << "\n";
  os << "eps = " << format_g17(cfg.training.init.eps) << "\n";
  os << "zeta = " << format_g17(cfg.training.init.zeta) << "\n";
  os << "jitter = " << format_g17(cfg.training.init.jitter) << "\n\n";
  os << "[noise]\n";
  if (cfg.training.noise) {
    os << "kind = " << to_string(cfg.training.noise->kind) << "\n";
    os << "amplitude = " << format_g17(cfg.training.noise->amplitude) << "\n";
    os << "seed = " << cfg.training.noise->seed << "\n";
    os << "distribution = "
       << (cfg.training.noise->distribution == NoiseDistribution::kUniform ? "uniform"
                                                                           : "gaussian")
       << "\n";
  } else {
    os << "kind = none\n";
  }
  os << "\n[fit]\n";
  os << "order_k = " << cfg.fit_order_k << "\n";
  os << "order_eps = " << cfg.fit_order_eps << "\n";
  os << "order_zeta = " << cfg.fit_order_zeta << "\n";
}

inline void write_run_config(const std::string& path, const RunConfig& cfg) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_run_config(f, cfg);
}

inline nlohmann::json run_config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["grid"] = {{"dt", cfg.training.grid.dt}, {"steps", cfg.training.grid.n_steps}};
  j["training"] = {{"learning_rate", cfg.training.learning_rate},
                   {"max_epochs", cfg.training.max_epochs},
                   {"stop_rms", cfg.training.stop_rms},
                   {"tie_k", cfg.training.tie_k},
                   {"tie_eps", cfg.training.tie_eps},
                   {"seed", cfg.seed}};
  j["init"] = {{"k", cfg.training.init.k},
               {"eps", cfg.training.init.eps},
               {"zeta", cfg.training.init.zeta},
               {"jitter", cfg.training.init.jitter}};
  if (cfg.training.noise) {
    j["noise"] = noise_to_json(*cfg.training.noise);
    j["noise"]["distribution"] =
        cfg.training.noise->distribution == NoiseDistribution::kUniform ? "uniform" : "gaussian";
  } else {
    j["noise"] = nullptr;
  }
  j["fit"] = {{"order_k", cfg.fit_order_k},
              {"order_eps", cfg.fit_order_eps},
              {"order_zeta", cfg.fit_order_zeta}};
  return j;
}

}  // namespace qnnent
