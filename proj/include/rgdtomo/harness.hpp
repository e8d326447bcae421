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

#ifndef RGDTOMO_HARNESS_HPP_
#define RGDTOMO_HARNESS_HPP_

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgdtomo/baselines.hpp"
#include "rgdtomo/bounds.hpp"
#include "rgdtomo/config.hpp"
#include "rgdtomo/io.hpp"
#include "rgdtomo/metrics.hpp"
#include "rgdtomo/rgd.hpp"
#include "rgdtomo/version.hpp"

namespace rgdtomo {

/// Output root: RGDTOMO_OUT when set, otherwise the working directory.
inline std::filesystem::path output_root() {
  if (const char* env = std::getenv("RGDTOMO_OUT"); env != nullptr && *env)
    return std::filesystem::path(env);
  return std::filesystem::current_path();
}

namespace detail {

/// Eigendecomposition of A A-dagger through the thin QR of A.
inline HermitianFactor factor_from_iterate(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix q =
      qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
  const Matrix r = qr.matrixQR()
                       .topRows(a.cols())
                       .template triangularView<Eigen::Upper>();
  const Matrix small = r * r.adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> es(small);
  if (es.info() != Eigen::Success)
    throw NumericError("factor_from_iterate: eigensolver failed");
  HermitianFactor f;
  const Eigen::Index n = a.cols();
  f.U.resize(a.rows(), n);
  f.lambda.resize(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const Eigen::Index src = n - 1 - c;  // descending eigenvalue order
    f.U.col(c) = q * es.eigenvectors().col(src);
    f.lambda[c] = es.eigenvalues()[src];
  }
  return f;
}

inline nlohmann::json metrics_to_json(const Metrics& m) {
  nlohmann::json j;
  j["frob_err"] = m.frob_err;
  j["frob_err_sq"] = m.frob_err_sq;
  j["nuclear_err"] = m.nuclear_err;
  j["trace_dev"] = m.trace_dev;
  j["min_eig"] = m.min_eig;
  if (m.fidelity) j["fidelity"] = *m.fidelity;
  return j;
}

inline std::string trace_to_csv(const SolverTrace& trace) {
  std::ostringstream os;
  write_trace_csv(trace, os, /*include_wall=*/false);
  return os.str();
}

/// Per-solver summary block: stop data plus terminal metrics against the
/// truth when one is available.
inline nlohmann::json solver_report(const SolverTrace& trace,
                                    const HermitianFactor& estimate,
                                    const HermitianFactor* truth) {
  nlohmann::json j;
  j["iterations"] =
      trace.rows.empty() ? 0 : static_cast<int>(trace.rows.size()) - 1;
  j["stop_reason"] = to_string(trace.stop_reason);
  j["diverged"] = trace.diverged;
  j["rank_collapsed"] = trace.rank_collapsed;
  j["terminal_objective"] =
      trace.rows.empty() ? 0.0 : trace.rows.back().objective;
  if (truth != nullptr) {
    j["metrics"] = metrics_to_json(compute_metrics(estimate, *truth));
    try {
      const DensityState psd = psd_normalize(estimate);
      j["psd_metrics"] = metrics_to_json(compute_metrics(psd.factor, *truth));
    } catch (const NumericError&) {
      j["psd_metrics"] = nullptr;
    }
  }
  return j;
}

}  // namespace detail

/**
 * Bound-calculator block of the summary. The noise level comes from the
 * concentration bound; the restricted-isometry constants are measured by
 * random probing when enabled, never assumed. The contraction section is
 * only emitted when every input it needs is on hand and finite.
 */
inline nlohmann::json bounds_report(const ExperimentConfig& cfg,
                                    const SensingEnsemble& ens,
                                    const HermitianFactor* truth) {
  nlohmann::json j;
  const double lambda =
      cfg.exact ? 0.0
                : noise_bound_lambda(ens.dim, ens.m, cfg.shots, cfg.noise_c);
  j["lambda"] = lambda;
  j["noise_c"] = cfg.noise_c;

  std::optional<double> d2, d3;
  if (cfg.probe_trials > 0) {
    const auto dim = static_cast<int>(ens.dim);
    const int r2 = std::min(2 * cfg.rank, dim);
    const int r3 = std::min(3 * cfg.rank, dim);
    d2 = rip_probe(ens, r2, cfg.probe_trials, cfg.seed).delta_hat;
    d3 = rip_probe(ens, r3, cfg.probe_trials, cfg.seed).delta_hat;
    j["delta_2r_hat"] = *d2;
    j["delta_3r_hat"] = *d3;
  }

  if (truth == nullptr || truth->cols() < cfg.rank) {
    j["contraction"] = nullptr;
    j["contraction_skipped"] = "no truth spectrum for sigma_r";
    return j;
  }
  RealVector lam = truth->lambda;
  std::sort(lam.data(), lam.data() + lam.size(), std::greater<double>());
  const double sigma1 = lam[0];
  const double sigma_r = lam[cfg.rank - 1];
  j["sigma1"] = sigma1;
  j["sigma_r"] = sigma_r;
  if (!d2 || !d3) {
    j["contraction"] = nullptr;
    j["contraction_skipped"] = "isometry probe disabled";
    return j;
  }
  if (sigma_r <= 0.0 || *d2 >= 1.0 || *d3 >= 1.0) {
    j["contraction"] = nullptr;
    j["contraction_skipped"] = "inputs outside the contraction regime";
    return j;
  }

  BoundInputs in;
  in.r = cfg.rank;
  in.sigma1 = sigma1;
  in.sigma_r = sigma_r;
  in.kappa = sigma1 / sigma_r;
  in.lambda = lambda;
  in.delta2r = *d2;
  in.delta3r = *d3;

  nlohmann::json c;
  c["theta"] = bound_theta(in);
  c["eta"] = bound_eta(in);
  c["phi"] = bound_phi(in);
  const GammaSeries gs = gamma_recursion(in, 8);
  c["gammas"] = gs.gammas;
  c["mus"] = gs.mus;
  const double sup = *std::max_element(gs.gammas.begin(), gs.gammas.end());
  if (sup < 1.0) {
    c["gamma_bar"] = sup;
    c["asymptote"] = error_bound_asymptote(in, sup);
    if (lambda > 0.0) {
      const double rho_frob = truth->frob_norm();
      c["iteration_estimate"] = iteration_estimate(in, sup, rho_frob);
    }
  } else {
    c["gamma_bar"] = nullptr;
    c["note"] = "recursion exceeds 1, no contraction certificate";
  }
  j["contraction"] = c;
  return j;
}

struct ExperimentArtifacts {
  std::filesystem::path dir;
  nlohmann::json summary;
};

/**
 * Runs one full experiment and writes its artifact directory:
 *
 *   ensemble.json           the sensing ensemble record
 *   dataset.json            ensemble + measurements + state recipe
 *   rgd_trace.csv           manifold solver trace
 *   exact_rgd_trace.csv     manifold solver on exact data (optional)
 *   mifgd_mu<MU>_trace.csv  one per momentum value
 *   summary.json            config echo, seeds, hash, terminal metrics,
 *                           bound-calculator outputs
 *
 * Every random stream derives from the single master seed, so rerunning
 * the same config reproduces every file byte for byte. Traces carry no
 * timing columns for the same reason.
 */
inline ExperimentArtifacts run_experiment(
    const ExperimentConfig& cfg, const std::filesystem::path& root = {}) {
  cfg.validate();
  const std::filesystem::path base = root.empty() ? output_root() : root;
  const std::filesystem::path dir = base / cfg.out_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw IoError("cannot create output directory '" + dir.string() + "': " +
                  ec.message());

  const DensityState state =
      make_state(cfg.state, cfg.qubits, cfg.rank, cfg.kappa, cfg.seed);
  const SensingEnsemble ens =
      sample_ensemble(cfg.qubits, cfg.m, cfg.seed, cfg.with_replacement);
  const MeasurementVector meas =
      cfg.exact ? exact_measurement(state, ens)
                : build_measurement(state, ens, cfg.shots, cfg.seed);

  write_json_file(dir / "ensemble.json", ensemble_to_json(ens));
  save_dataset(dir / "dataset.json", Dataset{ens, meas, state});

  SolverOptions sopts;
  sopts.rank = cfg.rank;
  sopts.max_iters = cfg.max_iters;
  sopts.stop_tol = cfg.stop_tol;
  sopts.objective_floor = cfg.objective_floor;
  sopts.record_truth_error = true;

  const SolveResult rgd = solve(meas.y, ens, sopts, &state.factor);
  write_text_file(dir / "rgd_trace.csv", detail::trace_to_csv(rgd.trace));

  nlohmann::json solvers;
  solvers["rgd"] = detail::solver_report(rgd.trace, rgd.estimate,
                                         &state.factor);

  std::vector<std::string> files = {"ensemble.json", "dataset.json",
                                    "rgd_trace.csv"};

  if (cfg.exact_trace && !cfg.exact) {
    const MeasurementVector exact = exact_measurement(state, ens);
    const SolveResult er = solve(exact.y, ens, sopts, &state.factor);
    write_text_file(dir / "exact_rgd_trace.csv",
                    detail::trace_to_csv(er.trace));
    solvers["exact_rgd"] =
        detail::solver_report(er.trace, er.estimate, &state.factor);
    files.push_back("exact_rgd_trace.csv");
  }

  const Matrix a0 = init_factor_from(init(meas.y, ens, cfg.rank));
  nlohmann::json mifgd = nlohmann::json::array();
  for (double mu : cfg.mu_list) {
    BaselineOptions bopts;
    bopts.eta = cfg.eta;
    bopts.mu = mu;
    bopts.max_iters = cfg.baseline_iters;
    bopts.record_truth_error = true;
    const BaselineResult res =
        mifgd_solve(meas.y, ens, a0, bopts, &state.factor);
    const std::string name =
        "mifgd_mu" + detail::format_double(mu) + "_trace.csv";
    write_text_file(dir / name, detail::trace_to_csv(res.trace));
    files.push_back(name);
    const HermitianFactor est = detail::factor_from_iterate(res.A);
    nlohmann::json entry = detail::solver_report(res.trace, est,
                                                 &state.factor);
    entry["mu"] = mu;
    entry["eta"] = cfg.eta;
    entry["trace_file"] = name;
    mifgd.push_back(entry);
  }
  solvers["mifgd"] = mifgd;

  nlohmann::json summary;
  summary["library"] = {{"name", kLibraryName}, {"version", kVersion}};
  summary["config"] = config_to_json(cfg);
  summary["seeds"] = {
      {"master", cfg.seed},
      {"ensemble_stream", derive_seed(cfg.seed, streams::kEnsemble)},
      {"measurement_stream_base", derive_seed(cfg.seed, streams::kMeasurement)},
      {"state_stream", derive_seed(cfg.seed, streams::kState)},
      {"probe_stream_base", derive_seed(cfg.seed, streams::kProbe)},
  };
  summary["ensemble"] = {
      {"hash", hash_to_hex(ensemble_hash(ens))},
      {"k", ens.qubits},
      {"m", ens.m},
      {"with_replacement", ens.with_replacement},
  };
  summary["solvers"] = solvers;
  summary["bounds"] = bounds_report(cfg, ens, &state.factor);
  files.push_back("summary.json");
  summary["files"] = files;
  write_json_file(dir / "summary.json", summary);

  return ExperimentArtifacts{dir, summary};
}

struct BenchEntry {
  std::string name;
  ExperimentConfig config;
};

/**
 * The reference protocol: Hadamard and GHZ states at 6 and 8 qubits with
 * m = 0.2 d^2 log d observables rounded to the usual figures, 8192 shots
 * per observable, eta = 0.01, and the five-point momentum grid. Each entry
 * runs under its own derived seed and writes its own subdirectory.
 */
inline std::vector<BenchEntry> bench_protocol(std::uint64_t seed,
                                              bool include_eight_qubits,
                                              int max_iters = 300,
                                              int baseline_iters = 300) {
  struct Row {
    const char* name;
    StateKind kind;
    int qubits;
    int m;
  };
  const std::vector<Row> rows = {
      {"hadamard6", StateKind::kHadamard, 6, 819},
      {"ghz6", StateKind::kGhz, 6, 1638},
      {"hadamard8", StateKind::kHadamard, 8, 13107},
      {"ghz8", StateKind::kGhz, 8, 26214},
  };
  std::vector<BenchEntry> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!include_eight_qubits && rows[i].qubits > 6) continue;
    ExperimentConfig cfg;
    cfg.state = rows[i].kind;
    cfg.qubits = rows[i].qubits;
    cfg.rank = 1;
    cfg.m = rows[i].m;
    cfg.shots = 8192;
    cfg.seed = derive_seed(seed, streams::kTrial, i);
    cfg.max_iters = max_iters;
    cfg.baseline_iters = baseline_iters;
    cfg.exact_trace = true;
    cfg.out_dir = rows[i].name;
    out.push_back(BenchEntry{rows[i].name, cfg});
  }
  return out;
}

inline nlohmann::json run_bench(std::uint64_t seed, bool include_eight_qubits,
                                const std::filesystem::path& root = {},
                                int max_iters = 300,
                                int baseline_iters = 300) {
  const std::filesystem::path base = root.empty() ? output_root() : root;
  nlohmann::json out;
  out["seed"] = seed;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& entry : bench_protocol(seed, include_eight_qubits,
                                          max_iters, baseline_iters)) {
    const ExperimentArtifacts art = run_experiment(entry.config, base);
    nlohmann::json e;
    e["name"] = entry.name;
    e["dir"] = art.dir.string();
    e["seed"] = entry.config.seed;
    e["rgd"] = art.summary.at("solvers").at("rgd");
    entries.push_back(e);
  }
  out["entries"] = entries;
  write_json_file(base / "bench_summary.json", out);
  return out;
}

}  // namespace rgdtomo

#endif  // RGDTOMO_HARNESS_HPP_
