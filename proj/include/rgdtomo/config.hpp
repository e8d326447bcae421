// Copyright 2026 The rgdtomo Authors
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

#ifndef RGDTOMO_CONFIG_HPP_
#define RGDTOMO_CONFIG_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgdtomo/errors.hpp"
#include "rgdtomo/io.hpp"
#include "rgdtomo/state.hpp"

namespace rgdtomo {

/**
 * Experiment description, parsed from a flat key=value file.
 *
 * Recognized keys (defaults in parentheses):
 *   state            hadamard | ghz | random_kappa        (ghz)
 *   k                qubit count, 1..12
 *   r                target rank (1)
 *   kappa            eigenvalue spread for random states (1.0)
 *   m                number of sampled observables
 *   shots            shots per observable (8192)
 *   exact            true for noiseless expectations (false)
 *   seed             master seed; every stream derives from it (42)
 *   max_iters        manifold solver iteration cap (300)
 *   stop_tol         relative-change stopping tolerance (1e-7)
 *   objective_floor  objective value treated as solved (1e-14)
 *   eta              baseline step size (0.01)
 *   mu_list          comma-separated momentum grid (0.125,0.25,...)
 *   baseline_iters   baseline iteration cap (300)
 *   out_dir          artifact directory, relative to the output root
 *   with_replacement sample observables with replacement (true)
 *   noise_c          constant in the operator-norm noise bound (1.0)
 *   probe_trials     random-matrix trials for the isometry probe (0 = off)
 *   exact_trace      also solve on exact data and write that trace (false)
 *
 * Lines starting with '#' and blank lines are ignored. Unknown or repeated
 * keys are errors, so typos fail loudly instead of silently using defaults.
 */
struct ExperimentConfig {
  StateKind state = StateKind::kGhz;
  int qubits = 0;
  int rank = 1;
  double kappa = 1.0;
  int m = 0;
  long shots = 8192;
  bool exact = false;
  std::uint64_t seed = 42;
  int max_iters = 300;
  double stop_tol = 1e-7;
  double objective_floor = 1e-14;
  double eta = 0.01;
  std::vector<double> mu_list = {0.125, 0.25, 1.0 / 3.0, 0.5, 0.75};
  int baseline_iters = 300;
  std::string out_dir = "experiment";
  bool with_replacement = true;
  double noise_c = 1.0;
  int probe_trials = 0;
  bool exact_trace = false;

  void validate() const {
    if (qubits < 1 || qubits > 12)
      throw ConfigError("config: k must be between 1 and 12");
    if (rank < 1 || (std::uint64_t{1} << qubits) < std::uint64_t(rank))
      throw ConfigError("config: r must be between 1 and 2^k");
    if (kappa < 1.0) throw ConfigError("config: kappa must be >= 1");
    if (m < 1) throw ConfigError("config: m must be >= 1");
    const double total = std::pow(4.0, qubits);
    if (static_cast<double>(m) > total)
      throw ConfigError("config: m cannot exceed 4^k");
    if (!exact && shots < 1)
      throw ConfigError("config: shots must be >= 1 unless exact");
    if (max_iters < 0 || baseline_iters < 0)
      throw ConfigError("config: iteration caps must be >= 0");
    if (stop_tol < 0 || objective_floor < 0)
      throw ConfigError("config: tolerances must be >= 0");
    if (eta <= 0) throw ConfigError("config: eta must be positive");
    for (double mu : mu_list)
      if (mu < 0) throw ConfigError("config: momentum values must be >= 0");
    if (noise_c <= 0) throw ConfigError("config: noise_c must be positive");
    if (probe_trials < 0)
      throw ConfigError("config: probe_trials must be >= 0");
    if (out_dir.empty()) throw ConfigError("config: out_dir must be set");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: key '" + key + "' expects a boolean, got '" +
                    value + "'");
}

inline double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" +
                      value + "'");
  }
  if (used != value.size())
    throw ConfigError("config: key '" + key + "' has trailing garbage in '" +
                      value + "'");
  return out;
}

inline long parse_long(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  long out = 0;
  try {
    out = std::stol(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" +
                      value + "'");
  }
  if (used != value.size())
    throw ConfigError("config: key '" + key + "' has trailing garbage in '" +
                      value + "'");
  return out;
}

inline std::uint64_t parse_seed(const std::string& key,
                                const std::string& value) {
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(value, &used);
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an unsigned "
                      "integer, got '" + value + "'");
  }
  if (used != value.size())
    throw ConfigError("config: key '" + key + "' has trailing garbage in '" +
                      value + "'");
  return static_cast<std::uint64_t>(out);
}

inline std::vector<double> parse_double_list(const std::string& key,
                                             const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw ConfigError("config: key '" + key + "' has an empty list entry");
    out.push_back(parse_double(key, item));
  }
  if (out.empty())
    throw ConfigError("config: key '" + key + "' expects a non-empty list");
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  bool have_k = false;
  bool have_m = false;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": empty key");
    if (!seen.insert(key).second)
      throw ConfigError("config: key '" + key + "' given twice");

    if (key == "state") {
      cfg.state = state_kind_from_string(value);
    } else if (key == "k") {
      cfg.qubits = static_cast<int>(detail::parse_long(key, value));
      have_k = true;
    } else if (key == "r") {
      cfg.rank = static_cast<int>(detail::parse_long(key, value));
    } else if (key == "kappa") {
      cfg.kappa = detail::parse_double(key, value);
    } else if (key == "m") {
      cfg.m = static_cast<int>(detail::parse_long(key, value));
      have_m = true;
    } else if (key == "shots") {
      cfg.shots = detail::parse_long(key, value);
    } else if (key == "exact") {
      cfg.exact = detail::parse_bool(key, value);
    } else if (key == "seed") {
      cfg.seed = detail::parse_seed(key, value);
    } else if (key == "max_iters") {
      cfg.max_iters = static_cast<int>(detail::parse_long(key, value));
    } else if (key == "stop_tol") {
      cfg.stop_tol = detail::parse_double(key, value);
    } else if (key == "objective_floor") {
      cfg.objective_floor = detail::parse_double(key, value);
    } else if (key == "eta") {
      cfg.eta = detail::parse_double(key, value);
    } else if (key == "mu_list") {
      cfg.mu_list = detail::parse_double_list(key, value);
    } else if (key == "baseline_iters") {
      cfg.baseline_iters = static_cast<int>(detail::parse_long(key, value));
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key == "with_replacement") {
      cfg.with_replacement = detail::parse_bool(key, value);
    } else if (key == "noise_c") {
      cfg.noise_c = detail::parse_double(key, value);
    } else if (key == "probe_trials") {
      cfg.probe_trials = static_cast<int>(detail::parse_long(key, value));
    } else if (key == "exact_trace") {
      cfg.exact_trace = detail::parse_bool(key, value);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  if (!have_k) throw ConfigError("config: key 'k' is required");
  if (!have_m) throw ConfigError("config: key 'm' is required");
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config_text(read_text_file(path));
}

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["state"] = to_string(cfg.state);
  j["k"] = cfg.qubits;
  j["r"] = cfg.rank;
  j["kappa"] = cfg.kappa;
  j["m"] = cfg.m;
  j["shots"] = cfg.shots;
  j["exact"] = cfg.exact;
  j["seed"] = cfg.seed;
  j["max_iters"] = cfg.max_iters;
  j["stop_tol"] = cfg.stop_tol;
  j["objective_floor"] = cfg.objective_floor;
  j["eta"] = cfg.eta;
  j["mu_list"] = cfg.mu_list;
  j["baseline_iters"] = cfg.baseline_iters;
  j["out_dir"] = cfg.out_dir;
  j["with_replacement"] = cfg.with_replacement;
  j["noise_c"] = cfg.noise_c;
  j["probe_trials"] = cfg.probe_trials;
  j["exact_trace"] = cfg.exact_trace;
  return j;
}

}  // namespace rgdtomo

#endif  // RGDTOMO_CONFIG_HPP_
