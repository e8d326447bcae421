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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rgdtomo/harness.hpp"
#include "rgdtomo/version.hpp"

namespace fs = std::filesystem;
using namespace rgdtomo;

namespace {

Dataset build_dataset(const ExperimentConfig& cfg) {
  const DensityState state =
      make_state(cfg.state, cfg.qubits, cfg.rank, cfg.kappa, cfg.seed);
  const SensingEnsemble ens =
      sample_ensemble(cfg.qubits, cfg.m, cfg.seed, cfg.with_replacement);
  const MeasurementVector meas =
      cfg.exact ? exact_measurement(state, ens)
                : build_measurement(state, ens, cfg.shots, cfg.seed);
  return Dataset{ens, meas, state};
}

std::string fmt(double v) { return detail::format_double(v); }

void write_trace_file(const SolverTrace& trace, const fs::path& path,
                      bool timing) {
  std::ostringstream os;
  write_trace_csv(trace, os, timing);
  write_text_file(path, os.str());
}

struct SimulateCmd {
  std::string config;
  std::string state = "ghz";
  int qubits = 0;
  int rank = 1;
  double kappa = 1.0;
  int m = 0;
  long shots = 8192;
  bool exact = false;
  std::uint64_t seed = 42;
  bool without_replacement = false;
  std::string out = "dataset.json";
  std::string ensemble_out;

  CLI::Option* state_opt = nullptr;
  CLI::Option* qubits_opt = nullptr;
  CLI::Option* rank_opt = nullptr;
  CLI::Option* kappa_opt = nullptr;
  CLI::Option* m_opt = nullptr;
  CLI::Option* shots_opt = nullptr;
  CLI::Option* exact_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* wr_opt = nullptr;

  ExperimentConfig merge() const {
    ExperimentConfig cfg;
    if (!config.empty()) cfg = load_config(config);
    if (state_opt->count()) cfg.state = state_kind_from_string(state);
    if (qubits_opt->count() || config.empty()) cfg.qubits = qubits;
    if (rank_opt->count()) cfg.rank = rank;
    if (kappa_opt->count()) cfg.kappa = kappa;
    if (m_opt->count() || config.empty()) cfg.m = m;
    if (shots_opt->count()) cfg.shots = shots;
    if (exact_opt->count()) cfg.exact = exact;
    if (seed_opt->count()) cfg.seed = seed;
    if (wr_opt->count()) cfg.with_replacement = !without_replacement;
    cfg.validate();
    return cfg;
  }

  void run() const {
    const ExperimentConfig cfg = merge();
    const Dataset ds = build_dataset(cfg);
    save_dataset(out, ds);
    if (!ensemble_out.empty())
      write_json_file(ensemble_out, ensemble_to_json(ds.ensemble));
    std::cout << "wrote " << out << " (k=" << cfg.qubits << " m=" << cfg.m
              << (cfg.exact ? " exact"
                            : " shots=" + std::to_string(cfg.shots))
              << " hash=" << hash_to_hex(ensemble_hash(ds.ensemble)) << ")\n";
  }
};

struct SolveCmd {
  std::string dataset;
  int rank = 1;
  int max_iters = 300;
  double stop_tol = 1e-7;
  double objective_floor = 1e-14;
  std::string trace = "rgd_trace.csv";
  bool timing = false;
  bool no_truth = false;

  void run() const {
    const Dataset ds = load_dataset(dataset);
    SolverOptions opts;
    opts.rank = rank;
    opts.max_iters = max_iters;
    opts.stop_tol = stop_tol;
    opts.objective_floor = objective_floor;
    const HermitianFactor* truth = nullptr;
    if (ds.state && !no_truth) {
      truth = &ds.state->factor;
      opts.record_truth_error = true;
    }
    const SolveResult res = solve(ds.measurement.y, ds.ensemble, opts, truth);
    write_trace_file(res.trace, trace, timing);
    std::cout << "wrote " << trace
              << " iters=" << res.trace.rows.size() - 1
              << " stop=" << to_string(res.trace.stop_reason)
              << " objective=" << fmt(res.trace.rows.back().objective);
    if (truth != nullptr) {
      const Metrics m = compute_metrics(res.estimate, *truth);
      std::cout << " frob_err=" << fmt(m.frob_err)
                << " frob_err_sq=" << fmt(m.frob_err_sq);
    }
    std::cout << "\n";
  }
};

struct BaselineCmd {
  std::string dataset;
  int rank = 1;
  double eta = 0.01;
  std::vector<double> mus = {0.125, 0.25, 1.0 / 3.0, 0.5, 0.75};
  int iters = 300;
  std::string out_dir = ".";
  bool timing = false;
  bool no_truth = false;

  void run() const {
    const Dataset ds = load_dataset(dataset);
    const HermitianFactor* truth = nullptr;
    bool record = false;
    if (ds.state && !no_truth) {
      truth = &ds.state->factor;
      record = true;
    }
    const Matrix a0 = init_factor_from(init(ds.measurement.y, ds.ensemble,
                                            rank));
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
      throw IoError("cannot create '" + out_dir + "': " + ec.message());

    std::vector<double> diverged_mus;
    for (double mu : mus) {
      BaselineOptions opts;
      opts.eta = eta;
      opts.mu = mu;
      opts.max_iters = iters;
      opts.record_truth_error = record;
      const BaselineResult res =
          mifgd_solve(ds.measurement.y, ds.ensemble, a0, opts, truth);
      const std::string name = "mifgd_mu" + fmt(mu) + "_trace.csv";
      write_trace_file(res.trace, fs::path(out_dir) / name, timing);
      std::cout << "wrote " << name
                << " iters=" << res.trace.rows.size() - 1
                << " stop=" << to_string(res.trace.stop_reason)
                << " objective=" << fmt(res.trace.rows.back().objective)
                << (res.trace.diverged ? " diverged" : "") << "\n";
      if (res.trace.diverged) diverged_mus.push_back(mu);
    }
    if (!diverged_mus.empty()) {
      std::ostringstream msg;
      msg << "baseline diverged at mu =";
      for (double mu : diverged_mus) msg << " " << fmt(mu);
      throw NumericError(msg.str());
    }
  }
};

struct BoundCmd {
  int rank = 1;
  double sigma1 = 1.0;
  double sigma_r = 1.0;
  double lambda = 0.0;
  double delta2r = 0.0;
  double delta3r = 0.0;
  int steps = 8;
  double gamma_bar = -1.0;
  double init_err = -1.0;
  int series_iters = 20;
  double rho_frob = -1.0;
  double c0 = 1.0, c1 = 4.0, c2 = 8.0;
  double eps = -1.0;

  CLI::Option* gamma_opt = nullptr;
  CLI::Option* init_opt = nullptr;
  CLI::Option* rho_opt = nullptr;
  CLI::Option* eps_opt = nullptr;

  void run() const {
    BoundInputs in;
    in.r = rank;
    in.sigma1 = sigma1;
    in.sigma_r = sigma_r;
    if (sigma_r <= 0.0) throw ConfigError("bound: sigma_r must be positive");
    in.kappa = sigma1 / sigma_r;
    in.lambda = lambda;
    in.delta2r = delta2r;
    in.delta3r = delta3r;

    nlohmann::json out;
    out["inputs"] = {{"r", in.r},           {"kappa", in.kappa},
                     {"sigma1", in.sigma1}, {"sigma_r", in.sigma_r},
                     {"lambda", in.lambda}, {"delta2r", in.delta2r},
                     {"delta3r", in.delta3r}};
    out["theta"] = bound_theta(in);
    out["eta"] = bound_eta(in);
    out["phi"] = bound_phi(in);
    const GammaSeries gs = gamma_recursion(in, steps);
    out["gammas"] = gs.gammas;
    out["mus"] = gs.mus;
    const double sup = *std::max_element(gs.gammas.begin(), gs.gammas.end());
    out["gamma_sup"] = sup;

    double bar = -1.0;
    if (gamma_opt->count()) {
      bar = gamma_bar;
    } else if (sup < 1.0) {
      bar = sup;
    }
    if (bar >= 0.0) {
      out["gamma_bar"] = bar;
      out["certificate_A_k"] = certificate_value(in, steps, bar);
      out["asymptote"] = error_bound_asymptote(in, bar);
      if (init_opt->count()) {
        if (init_err < 0.0)
          throw ConfigError("bound: init error must be >= 0");
        out["series"] = error_bound_series(in, bar, init_err, series_iters);
      }
      if (rho_opt->count() && lambda > 0.0)
        out["iteration_estimate"] =
            iteration_estimate(in, bar, rho_frob, c0, c1, c2);
      if (eps_opt->count())
        out["iteration_estimate_noiseless"] =
            iteration_estimate_noiseless(rank, in.kappa, eps, bar, c0);
    } else {
      out["gamma_bar"] = nullptr;
      out["note"] = "recursion exceeds 1, pass --gamma-bar to force one";
    }
    std::cout << out.dump(2) << "\n";
  }
};

struct ProbeCmd {
  int qubits = 2;
  int m = 16;
  std::uint64_t seed = 42;
  int rank = 2;
  int trials = 20;
  bool without_replacement = false;
  std::string labels_file;

  void run() const {
    SensingEnsemble ens;
    if (!labels_file.empty()) {
      ens = ensemble_from_json(read_json_file(labels_file));
    } else {
      ens = sample_ensemble(qubits, m, seed, !without_replacement);
    }
    const RipProbeResult probe = rip_probe(ens, rank, trials, seed);
    nlohmann::json out;
    out["k"] = ens.qubits;
    out["m"] = ens.m;
    out["rank"] = rank;
    out["trials"] = trials;
    out["hash"] = hash_to_hex(ensemble_hash(ens));
    out["delta_hat"] = probe.delta_hat;
    out["samples"] = probe.samples;
    std::cout << out.dump(2) << "\n";
  }
};

struct BenchCmd {
  std::uint64_t seed = 42;
  std::string out_root;
  bool skip_eight = false;
  int max_iters = 300;
  int baseline_iters = 300;

  void run() const {
    const fs::path root =
        out_root.empty() ? output_root() : fs::path(out_root);
    const nlohmann::json out =
        run_bench(seed, !skip_eight, root, max_iters, baseline_iters);
    for (const auto& e : out.at("entries")) {
      std::cout << e.at("name").get<std::string>() << " -> "
                << e.at("dir").get<std::string>() << " frob_err_sq="
                << fmt(e.at("rgd").at("metrics").at("frob_err_sq")
                           .get<double>())
                << "\n";
    }
    std::cout << "wrote " << (root / "bench_summary.json").string() << "\n";
  }
};

struct DecodeCmd {
  std::string counts;
  std::string out = "dataset.json";
  std::string convention;

  void run() const {
    std::optional<CountsConvention> conv;
    if (!convention.empty())
      conv = counts_convention_from_string(convention);
    const Dataset ds = dataset_from_counts_json(read_json_file(counts), conv);
    save_dataset(out, ds);
    std::cout << "wrote " << out << " (k=" << ds.ensemble.qubits
              << " m=" << ds.ensemble.m
              << " hash=" << hash_to_hex(ensemble_hash(ds.ensemble)) << ")\n";
  }
};

struct RunCmd {
  std::string config;
  std::uint64_t seed = 0;
  std::string out_root;

  CLI::Option* seed_opt = nullptr;

  void run() const {
    ExperimentConfig cfg = load_config(config);
    if (seed_opt->count()) cfg.seed = seed;
    const fs::path root =
        out_root.empty() ? fs::path() : fs::path(out_root);
    const ExperimentArtifacts art = run_experiment(cfg, root);
    const auto& rgd = art.summary.at("solvers").at("rgd");
    std::cout << "wrote " << art.dir.string()
              << " stop=" << rgd.at("stop_reason").get<std::string>()
              << " frob_err_sq="
              << fmt(rgd.at("metrics").at("frob_err_sq").get<double>())
              << "\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank state estimation workbench"};
  app.set_version_flag("--version,-V",
                       std::string(kLibraryName) + " " + kVersion);
  app.require_subcommand(1);

  SimulateCmd sim;
  auto* s = app.add_subcommand("simulate",
                               "Sample a state and ensemble into a dataset");
  s->add_option("--config", sim.config, "Config file to start from");
  sim.state_opt = s->add_option("--state", sim.state,
                                "hadamard | ghz | random_kappa");
  sim.qubits_opt = s->add_option("--k", sim.qubits, "Qubit count");
  sim.rank_opt = s->add_option("--r", sim.rank, "Target rank");
  sim.kappa_opt = s->add_option("--kappa", sim.kappa,
                                "Eigenvalue spread for random states");
  sim.m_opt = s->add_option("--m", sim.m, "Number of observables");
  sim.shots_opt = s->add_option("--shots", sim.shots, "Shots per observable");
  sim.exact_opt = s->add_flag("--exact", sim.exact,
                              "Noiseless expectation values");
  sim.seed_opt = s->add_option("--seed", sim.seed, "Master seed");
  sim.wr_opt = s->add_flag("--without-replacement", sim.without_replacement,
                           "Sample distinct observables");
  s->add_option("--out", sim.out, "Dataset file to write");
  s->add_option("--ensemble-out", sim.ensemble_out,
                "Also write the bare ensemble record");
  s->callback([&sim] { sim.run(); });

  SolveCmd sol;
  auto* so = app.add_subcommand("solve", "Run the manifold solver on a "
                                         "dataset");
  so->add_option("--dataset", sol.dataset, "Dataset file")->required();
  so->add_option("--r", sol.rank, "Solver rank");
  so->add_option("--max-iters", sol.max_iters, "Iteration cap");
  so->add_option("--stop-tol", sol.stop_tol, "Relative change tolerance");
  so->add_option("--objective-floor", sol.objective_floor,
                 "Objective treated as solved");
  so->add_option("--trace", sol.trace, "Trace CSV to write");
  so->add_flag("--timing", sol.timing, "Add a wall_ms column");
  so->add_flag("--no-truth", sol.no_truth,
               "Skip truth-error recording even when the dataset has a "
               "state recipe");
  so->callback([&sol] { sol.run(); });

  BaselineCmd base;
  auto* b = app.add_subcommand("baseline", "Run the momentum baseline "
                                           "grid on a dataset");
  b->add_option("--dataset", base.dataset, "Dataset file")->required();
  b->add_option("--r", base.rank, "Factor rank");
  b->add_option("--eta", base.eta, "Step size");
  b->add_option("--mu", base.mus, "Momentum values")->delimiter(',');
  b->add_option("--iters", base.iters, "Iteration cap");
  b->add_option("--out-dir", base.out_dir, "Directory for trace files");
  b->add_flag("--timing", base.timing, "Add a wall_ms column");
  b->add_flag("--no-truth", base.no_truth, "Skip truth-error recording");
  b->callback([&base] { base.run(); });

  BoundCmd bound;
  auto* bo = app.add_subcommand("bound", "Evaluate the contraction "
                                         "recursion and error bounds");
  bo->add_option("--r", bound.rank, "Rank");
  bo->add_option("--sigma1", bound.sigma1, "Largest eigenvalue");
  bo->add_option("--sigma-r", bound.sigma_r, "r-th eigenvalue");
  bo->add_option("--lambda", bound.lambda, "Noise level");
  bo->add_option("--delta2r", bound.delta2r, "Isometry constant at 2r");
  bo->add_option("--delta3r", bound.delta3r, "Isometry constant at 3r");
  bo->add_option("--steps", bound.steps, "Recursion steps");
  bound.gamma_opt = bo->add_option("--gamma-bar", bound.gamma_bar,
                                   "Contraction rate override");
  bound.init_opt = bo->add_option("--init-err", bound.init_err,
                                  "Initial error for the bound series");
  bo->add_option("--series-iters", bound.series_iters,
                 "Length of the bound series");
  bound.rho_opt = bo->add_option("--rho-frob", bound.rho_frob,
                                 "Truth Frobenius norm for the iteration "
                                 "estimate");
  bo->add_option("--c0", bound.c0, "Iteration estimate constant");
  bo->add_option("--c1", bound.c1, "Iteration estimate constant");
  bo->add_option("--c2", bound.c2, "Iteration estimate constant");
  bound.eps_opt = bo->add_option("--eps", bound.eps,
                                 "Target error for the noiseless estimate");
  bo->callback([&bound] { bound.run(); });

  ProbeCmd probe;
  auto* pr = app.add_subcommand("rip-probe", "Measure the restricted "
                                             "isometry constant");
  pr->add_option("--k", probe.qubits, "Qubit count");
  pr->add_option("--m", probe.m, "Number of observables");
  pr->add_option("--seed", probe.seed, "Master seed");
  pr->add_option("--rank", probe.rank, "Probe rank");
  pr->add_option("--trials", probe.trials, "Random trials");
  pr->add_flag("--without-replacement", probe.without_replacement,
               "Sample distinct observables");
  pr->add_option("--labels-file", probe.labels_file,
                 "Probe an existing ensemble record instead of sampling");
  pr->callback([&probe] { probe.run(); });

  BenchCmd bench;
  auto* be = app.add_subcommand("bench", "Run the reference protocol");
  be->add_option("--seed", bench.seed, "Master seed");
  be->add_option("--out-root", bench.out_root, "Output root directory");
  be->add_flag("--skip-eight", bench.skip_eight,
               "Only run the 6-qubit entries");
  be->add_option("--max-iters", bench.max_iters, "Solver iteration cap");
  be->add_option("--baseline-iters", bench.baseline_iters,
                 "Baseline iteration cap");
  be->callback([&bench] { bench.run(); });

  DecodeCmd dec;
  auto* de = app.add_subcommand("decode", "Turn a counts file into a "
                                          "dataset");
  de->add_option("--counts", dec.counts, "Counts JSON file")->required();
  de->add_option("--out", dec.out, "Dataset file to write");
  de->add_option("--convention", dec.convention,
                 "Override the stored counts convention")
      ->check(CLI::IsMember({"std", "paper"}));
  de->callback([&dec] { dec.run(); });

  RunCmd runc;
  auto* ru = app.add_subcommand("run", "Run a full experiment from a "
                                       "config file");
  ru->add_option("--config", runc.config, "Config file")->required();
  runc.seed_opt = ru->add_option("--seed", runc.seed,
                                 "Override the config seed");
  ru->add_option("--out-root", runc.out_root, "Output root directory");
  ru->callback([&runc] { runc.run(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
