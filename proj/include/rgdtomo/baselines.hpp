// Copyright 2026 The rgdtomo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cmath>

#include "rgdtomo/errors.hpp"
#include "rgdtomo/factor.hpp"
#include "rgdtomo/sensing.hpp"
#include "rgdtomo/trace.hpp"

namespace rgdtomo {

/**
 * Iterate of the factored gradient baselines. The density estimate is
 * A A†; prev holds the previous iterate for the momentum term.
 */
struct FactorIterate {
  Matrix A;
  Matrix prev;
};

inline double factor_objective(const RealVector& y,
                               const SensingEnsemble& ens, const Matrix& a) {
  const Matrix x = a * a.adjoint();
  return 0.5 * (y - forward_dense(ens, x)).squaredNorm();
}

/// Euclidean gradient of the factored objective: -2 A†(y - A(AA†)) A.
inline Matrix factor_gradient(const RealVector& y, const SensingEnsemble& ens,
                              const Matrix& a) {
  const Matrix x = a * a.adjoint();
  const RealVector resid = y - forward_dense(ens, x);
  return -2.0 * adjoint(ens, resid) * a;
}

/// Frobenius unit-ball projection.
inline Matrix project_unit_ball(const Matrix& a) {
  const double n = a.norm();
  return (n > 1.0) ? Matrix(a / n) : a;
}

/// Plain projected factored gradient descent step.
inline FactorIterate fgd_step(const FactorIterate& it, const RealVector& y,
                              const SensingEnsemble& ens, double eta) {
  FactorIterate next;
  next.A = project_unit_ball(it.A - eta * factor_gradient(y, ens, it.A));
  next.prev = it.A;
  return next;
}

/**
 * Momentum-accelerated step in the classical heavy-ball form: extrapolate
 * with the previous iterate, take the gradient at the extrapolated point,
 * project. mu = 0 reduces to fgd_step exactly.
 */
inline FactorIterate mifgd_step(const FactorIterate& it, const RealVector& y,
                                const SensingEnsemble& ens, double eta,
                                double mu) {
  const Matrix z = it.A + mu * (it.A - it.prev);
  FactorIterate next;
  next.A = project_unit_ball(z - eta * factor_gradient(y, ens, z));
  next.prev = it.A;
  return next;
}

/// Rank-r factor whose square is the positive part of the given estimate.
inline Matrix init_factor_from(const HermitianFactor& f) {
  Matrix a(f.dim(), f.cols());
  for (Eigen::Index c = 0; c < f.cols(); ++c)
    a.col(c) = f.U.col(c) * std::sqrt(std::max(f.lambda[c], 0.0));
  return a;
}

struct BaselineOptions {
  double eta = 0.01;
  double mu = 0.0;
  int max_iters = 300;
  double divergence_factor = 10.0;  // stop when objective exceeds this
                                    // multiple of its initial value
  bool record_truth_error = false;
};

struct BaselineResult {
  Matrix A;
  SolverTrace trace;
};

/**
 * Runs the momentum baseline for a fixed budget from the given factor.
 * The step_size column of the trace carries the constant learning rate.
 */
inline BaselineResult mifgd_solve(const RealVector& y,
                                  const SensingEnsemble& ens, const Matrix& a0,
                                  const BaselineOptions& opts,
                                  const HermitianFactor* truth = nullptr) {
  if (opts.max_iters < 0)
    throw ConfigError("mifgd_solve: max_iters must be >= 0");
  if (opts.eta <= 0.0) throw ConfigError("mifgd_solve: eta must be positive");
  if (opts.mu < 0.0) throw ConfigError("mifgd_solve: mu must be >= 0");
  if (y.size() != ens.m)
    throw ConfigError("mifgd_solve: data length does not match ensemble");
  if (static_cast<std::uint64_t>(a0.rows()) != ens.dim)
    throw ConfigError("mifgd_solve: factor dimension does not match "
                      "ensemble");

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&t0]() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };
  Matrix truth_dense;
  if (truth != nullptr && opts.record_truth_error)
    truth_dense = truth->densify();
  auto truth_err = [&](const Matrix& a) {
    if (truth_dense.size() == 0) return std::nan("");
    return (a * a.adjoint() - truth_dense).squaredNorm();
  };

  BaselineResult out;
  out.trace.stop_reason = StopReason::kMaxIters;
  FactorIterate it{a0, a0};
  const double obj0 = factor_objective(y, ens, it.A);
  out.trace.rows.push_back(
      {0, obj0, std::nan(""), truth_err(it.A), elapsed_ms()});
  const double blowup = opts.divergence_factor * std::max(obj0, 1e-30);

  for (int k = 1; k <= opts.max_iters; ++k) {
    it = mifgd_step(it, y, ens, opts.eta, opts.mu);
    const double obj = factor_objective(y, ens, it.A);
    out.trace.rows.push_back(
        {k, obj, opts.eta, truth_err(it.A), elapsed_ms()});
    if (obj > blowup) {
      out.trace.diverged = true;
      out.trace.stop_reason = StopReason::kDiverged;
      break;
    }
  }
  out.A = it.A;
  return out;
}

}  // namespace rgdtomo
