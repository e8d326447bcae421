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

#ifndef RGDTOMO_IO_HPP_
#define RGDTOMO_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgdtomo/errors.hpp"
#include "rgdtomo/sensing.hpp"
#include "rgdtomo/shots.hpp"
#include "rgdtomo/state.hpp"

namespace rgdtomo {

/**
 * On-disk dataset: the sensing ensemble, the measured vector y, and (when
 * the data came from a simulated state) the recipe that regenerates the
 * ground truth. Counts-decoded datasets carry no state.
 */
struct Dataset {
  SensingEnsemble ensemble;
  MeasurementVector measurement;
  std::optional<DensityState> state;
};

inline std::string hash_to_hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setfill('0') << std::setw(16) << h;
  return os.str();
}

inline nlohmann::json ensemble_to_json(const SensingEnsemble& ens) {
  nlohmann::json j;
  j["k"] = ens.qubits;
  j["m"] = ens.m;
  j["seed"] = ens.seed;
  j["with_replacement"] = ens.with_replacement;
  j["labels"] = ensemble_labels(ens);
  j["hash"] = hash_to_hex(ensemble_hash(ens));
  return j;
}

inline SensingEnsemble ensemble_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw IoError("ensemble record: expected an object");
  for (const char* key : {"k", "m", "labels"})
    if (!j.contains(key))
      throw IoError(std::string("ensemble record: missing field '") + key +
                    "'");
  const int qubits = j.at("k").get<int>();
  const auto labels = j.at("labels").get<std::vector<std::string>>();
  const std::uint64_t seed = j.value("seed", std::uint64_t{0});
  const bool with_replacement = j.value("with_replacement", true);
  if (static_cast<int>(labels.size()) != j.at("m").get<int>())
    throw IoError("ensemble record: m does not match the label count");
  SensingEnsemble ens = ensemble_from_labels(labels, seed, with_replacement);
  if (ens.qubits != qubits)
    throw IoError("ensemble record: k does not match the label length");
  if (j.contains("hash")) {
    const auto stored = j.at("hash").get<std::string>();
    if (stored != hash_to_hex(ensemble_hash(ens)))
      throw IoError("ensemble record: hash mismatch, record is corrupt");
  }
  return ens;
}

inline nlohmann::json measurement_to_json(const MeasurementVector& mv) {
  nlohmann::json j;
  j["exact"] = mv.exact;
  j["shots"] = mv.shots;
  j["seed"] = mv.seed;
  std::vector<double> y(mv.y.data(), mv.y.data() + mv.y.size());
  j["y"] = y;
  return j;
}

inline MeasurementVector measurement_from_json(const nlohmann::json& j,
                                               int expected_m) {
  if (!j.is_object() || !j.contains("y"))
    throw IoError("measurement record: missing field 'y'");
  MeasurementVector mv;
  mv.exact = j.value("exact", false);
  mv.shots = j.value("shots", long{0});
  mv.seed = j.value("seed", std::uint64_t{0});
  const auto y = j.at("y").get<std::vector<double>>();
  if (static_cast<int>(y.size()) != expected_m)
    throw IoError("measurement record: y length does not match the "
                  "ensemble");
  mv.y.resize(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i)
    mv.y[static_cast<Eigen::Index>(i)] = y[i];
  return mv;
}

inline nlohmann::json state_to_json(const DensityState& state) {
  if (state.kind == StateKind::kCustom)
    throw ConfigError("state record: custom states have no recipe to "
                      "serialize");
  nlohmann::json j;
  j["kind"] = to_string(state.kind);
  j["k"] = state.qubits;
  j["r"] = state.rank;
  j["kappa"] = state.kappa;
  j["seed"] = state.seed;
  return j;
}

inline DensityState state_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("k"))
    throw IoError("state record: missing 'kind' or 'k'");
  const auto kind = state_kind_from_string(j.at("kind").get<std::string>());
  const int qubits = j.at("k").get<int>();
  const int rank = j.value("r", 1);
  const double kappa = j.value("kappa", 1.0);
  const std::uint64_t seed = j.value("seed", std::uint64_t{0});
  return make_state(kind, qubits, rank, kappa, seed);
}

inline nlohmann::json dataset_to_json(const Dataset& ds) {
  nlohmann::json j;
  j["ensemble"] = ensemble_to_json(ds.ensemble);
  j["measurement"] = measurement_to_json(ds.measurement);
  if (ds.state) j["state"] = state_to_json(*ds.state);
  return j;
}

inline Dataset dataset_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("ensemble") || !j.contains("measurement"))
    throw IoError("dataset: missing 'ensemble' or 'measurement'");
  Dataset ds;
  ds.ensemble = ensemble_from_json(j.at("ensemble"));
  ds.measurement = measurement_from_json(j.at("measurement"), ds.ensemble.m);
  if (j.contains("state")) ds.state = state_from_json(j.at("state"));
  return ds;
}

/**
 * Decodes a counts file into a dataset.
 *
 * Expected shape:
 *   {"k": 2, "shots": 8192, "convention": "std",
 *    "measurements": [{"label": "XZ", "counts": {"01": 123, ...}}, ...]}
 *
 * Each entry becomes one ensemble row; y_i is the decoded expectation
 * estimate times the ensemble scale. An explicit convention argument
 * overrides the one stored in the file.
 */
inline Dataset dataset_from_counts_json(
    const nlohmann::json& j,
    std::optional<CountsConvention> convention_override = std::nullopt) {
  if (!j.is_object() || !j.contains("k") || !j.contains("measurements"))
    throw IoError("counts file: missing 'k' or 'measurements'");
  const int qubits = j.at("k").get<int>();
  const long shots = j.value("shots", long{0});
  CountsConvention convention = CountsConvention::kStdBasis;
  if (convention_override) {
    convention = *convention_override;
  } else if (j.contains("convention")) {
    convention =
        counts_convention_from_string(j.at("convention").get<std::string>());
  }
  const auto& rows = j.at("measurements");
  if (!rows.is_array() || rows.empty())
    throw IoError("counts file: 'measurements' must be a non-empty array");

  std::vector<std::string> labels;
  std::vector<double> estimates;
  labels.reserve(rows.size());
  estimates.reserve(rows.size());
  for (const auto& row : rows) {
    if (!row.is_object() || !row.contains("label") || !row.contains("counts"))
      throw IoError("counts file: each measurement needs 'label' and "
                    "'counts'");
    const auto label = row.at("label").get<std::string>();
    if (static_cast<int>(label.size()) != qubits)
      throw IoError("counts file: label '" + label +
                    "' does not have k characters");
    std::map<std::string, long> counts;
    for (const auto& [bits, n] : row.at("counts").items())
      counts[bits] = n.get<long>();
    labels.push_back(label);
    estimates.push_back(decode_counts(counts, label, convention));
  }

  Dataset ds;
  ds.ensemble = ensemble_from_labels(labels);
  ds.measurement.exact = false;
  ds.measurement.shots = shots;
  ds.measurement.seed = 0;
  ds.measurement.y.resize(static_cast<Eigen::Index>(estimates.size()));
  for (std::size_t i = 0; i < estimates.size(); ++i)
    ds.measurement.y[static_cast<Eigen::Index>(i)] =
        ds.ensemble.scale * estimates[i];
  return ds;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed on '" + path.string() + "'");
  return buf.str();
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed on '" + path.string() + "'");
}

inline nlohmann::json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path,
                            const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

inline Dataset load_dataset(const std::filesystem::path& path) {
  return dataset_from_json(read_json_file(path));
}

inline void save_dataset(const std::filesystem::path& path,
                         const Dataset& ds) {
  write_json_file(path, dataset_to_json(ds));
}

}  // namespace rgdtomo

#endif  // RGDTOMO_IO_HPP_
