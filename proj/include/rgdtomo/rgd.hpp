// Copyright 2026 The rgdtomo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <vector>

#include "rgdtomo/errors.hpp"
#include "rgdtomo/factor.hpp"
#include "rgdtomo/sensing.hpp"
#include "rgdtomo/trace.hpp"

namespace rgdtomo {

/**
 * Element of the tangent space at a rank-r Hermitian point, stored as
 * T = U C U† + B U† + U B† with C Hermitian and B orthogonal to U.
 * U is the base point's column space; nothing here is ever d x d.
 */
struct TangentElement {
  Matrix U;
  Matrix B;
  Matrix C;

  double norm_sq() const { return C.squaredNorm() + 2.0 * B.squaredNorm(); }

  Matrix densify() const {
    return U * C * U.adjoint() + B * U.adjoint() + U * B.adjoint();
  }
};

/// Projects a Hermitian G onto the tangent space at x. O(d^2 r) work.
inline TangentElement tangent_project(const HermitianFactor& x,
                                      const Matrix& g) {
  if (g.rows() != x.dim() || g.cols() != x.dim())
    throw ConfigError("tangent_project: gradient shape mismatch");
  TangentElement t;
  t.U = x.U;
  const Matrix a = g * x.U;
  const Matrix c_raw = x.U.adjoint() * a;
  // Hermitian up to roundoff; make it exact.
  t.C = 0.5 * (c_raw + c_raw.adjoint());
  t.B = a - x.U * t.C;
  return t;
}

namespace detail {

// Orthonormal basis [U Q] plus the 2r x 2r core of the tangent element in
// that basis: K = [[C, R†], [R, 0]] where B = Q R.
struct AugmentedTangent {
  Matrix basis;
  Matrix core;
};

inline AugmentedTangent augment(const TangentElement& t) {
  const auto d = t.U.rows();
  const auto r = t.U.cols();
  Eigen::HouseholderQR<Matrix> qr(t.B);
  const Matrix q = qr.householderQ() * Matrix::Identity(d, r);
  const Matrix rr = qr.matrixQR()
                        .topRows(r)
                        .template triangularView<Eigen::Upper>()
                        .toDenseMatrix();
  AugmentedTangent aug;
  aug.basis.resize(d, 2 * r);
  aug.basis << t.U, q;
  aug.core = Matrix::Zero(2 * r, 2 * r);
  aug.core.topLeftCorner(r, r) = t.C;
  aug.core.topRightCorner(r, r) = rr.adjoint();
  aug.core.bottomLeftCorner(r, r) = rr;
  return aug;
}

// Eigenform of basis * core * basis† for a Hermitian small core.
inline HermitianFactor eigenform(const AugmentedTangent& aug) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(aug.core);
  return {aug.basis * es.eigenvectors(), es.eigenvalues()};
}

// Index order by descending eigenvalue magnitude; ties keep the lower
// solver index first.
inline std::vector<Eigen::Index> magnitude_order(const RealVector& vals) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(vals.size()));
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = static_cast<Eigen::Index>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return std::abs(vals[a]) > std::abs(vals[b]);
                   });
  return order;
}

}  // namespace detail

/// ||A(T)||_2^2 for a tangent element, via its small eigenform.
inline double forward_tangent_norm_sq(const SensingEnsemble& ens,
                                      const TangentElement& t) {
  if (t.U.cols() == 0) return 0.0;
  const auto f = detail::eigenform(detail::augment(t));
  return forward(ens, f).squaredNorm();
}

/**
 * Exact line-search step length ||T||_F^2 / ||A(T)||_2^2.
 *
 * Returns nothing when the direction vanishes or the map annihilates it;
 * the caller treats that as convergence.
 */
inline std::optional<double> step_size(const SensingEnsemble& ens,
                                       const TangentElement& t) {
  const double n2 = t.norm_sq();
  if (n2 == 0.0 || !std::isfinite(n2)) return std::nullopt;
  const double den = forward_tangent_norm_sq(ens, t);
  if (den <= n2 * 1e-14) return std::nullopt;
  return n2 / den;
}

/** Best rank-r Hermitian approximation, largest eigenvalues by magnitude. */
inline HermitianFactor hard_threshold(const Matrix& m, int rank,
                                      double asym_tol = 1e-8) {
  if (m.rows() != m.cols()) throw ConfigError("hard_threshold: not square");
  if (rank < 1 || rank > m.rows())
    throw ConfigError("hard_threshold: rank out of range");
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > asym_tol)
    throw NumericError("hard_threshold: input asymmetry " +
                       std::to_string(asym) + " exceeds tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  const auto order = detail::magnitude_order(es.eigenvalues());
  Matrix u(m.rows(), rank);
  RealVector lam(rank);
  for (int i = 0; i < rank; ++i) {
    const auto idx = order[static_cast<std::size_t>(i)];
    u.col(i) = es.eigenvectors().col(idx);
    lam[i] = es.eigenvalues()[idx];
  }
  return {u, lam};
}

/// Spectral initialization: rank-r truncation of the adjointed data.
inline HermitianFactor init(const RealVector& y, const SensingEnsemble& ens,
                            int rank) {
  return hard_threshold(adjoint(ens, y), rank);
}

/// Adjointed residual A†(y - A(X)); the ascent direction of the objective.
inline Matrix residual_gradient(const RealVector& y,
                                const SensingEnsemble& ens,
                                const HermitianFactor& x) {
  return adjoint(ens, y - forward(ens, x));
}

struct RetractResult {
  HermitianFactor factor;
  bool collapsed = false;   // fewer than `rank` nonzero eigenvalues kept
  double frob_change = 0.0; // ||X_new - X_old||_F, computed in the span
};

/**
 * Retraction: rank-r truncation of X + alpha T without densifying.
 *
 * X + alpha T = [U Q] K [U Q]† with the 2r x 2r core
 * K = [[diag(lambda) + alpha C, alpha R†], [alpha R, 0]], so one small
 * eigendecomposition gives the truncation. Ties in eigenvalue magnitude
 * keep the lower solver index.
 */
inline RetractResult retract(const HermitianFactor& x, const TangentElement& t,
                             double alpha, int rank) {
  if (!std::isfinite(alpha)) throw NumericError("retract: bad step length");
  if (x.U.cols() != t.U.cols() || x.dim() != t.U.rows())
    throw ConfigError("retract: tangent element does not match base point");
  const auto rx = x.U.cols();
  if (rx == 0) return {x, false, 0.0};

  auto aug = detail::augment(t);
  aug.core *= alpha;
  aug.core.topLeftCorner(rx, rx) += Matrix(x.lambda.asDiagonal());

  Eigen::SelfAdjointEigenSolver<Matrix> es(aug.core);
  const RealVector vals = es.eigenvalues();
  const auto order = detail::magnitude_order(vals);

  const double top = vals.cwiseAbs().maxCoeff();
  const double zero_tol = 1e-14 * top;
  std::vector<Eigen::Index> kept;
  for (int i = 0; i < rank && i < static_cast<int>(order.size()); ++i) {
    const auto idx = order[static_cast<std::size_t>(i)];
    if (top == 0.0 || std::abs(vals[idx]) <= zero_tol) break;
    kept.push_back(idx);
  }

  RetractResult res;
  res.collapsed = static_cast<int>(kept.size()) < rank;

  const auto w = static_cast<Eigen::Index>(kept.size());
  Matrix small_vecs(2 * rx, w);
  RealVector lam(w);
  for (Eigen::Index i = 0; i < w; ++i) {
    small_vecs.col(i) = es.eigenvectors().col(kept[static_cast<std::size_t>(i)]);
    lam[i] = vals[kept[static_cast<std::size_t>(i)]];
  }
  res.factor = {aug.basis * small_vecs, lam};

  // Change measured inside span[U Q], where both iterates live exactly.
  Matrix m_new = Matrix::Zero(2 * rx, 2 * rx);
  if (w > 0) m_new = small_vecs * lam.asDiagonal() * small_vecs.adjoint();
  Matrix m_old = Matrix::Zero(2 * rx, 2 * rx);
  m_old.topLeftCorner(rx, rx) = Matrix(x.lambda.asDiagonal());
  res.frob_change = (m_new - m_old).norm();
  return res;
}

struct SolverOptions {
  int rank = 1;
  int max_iters = 300;
  double stop_tol = 1e-7;          // relative iterate change
  double objective_floor = 1e-14;  // absolute objective value
  bool record_truth_error = false;
};

struct SolveResult {
  HermitianFactor estimate;
  SolverTrace trace;
};

/**
 * Riemannian gradient descent on the rank-r manifold.
 *
 * Each iteration projects the adjointed residual onto the tangent space,
 * takes the exact line-search step, and retracts back to rank r. Row 0 of
 * the trace is the spectral initialization. When `truth` is given and
 * error recording is on, frob_err_sq holds ||X_k - truth||_F^2.
 */
inline SolveResult solve(const RealVector& y, const SensingEnsemble& ens,
                         const SolverOptions& opts,
                         const HermitianFactor* truth = nullptr) {
  if (opts.rank < 1) throw ConfigError("solve: rank must be >= 1");
  if (opts.max_iters < 0) throw ConfigError("solve: max_iters must be >= 0");
  if (y.size() != ens.m)
    throw ConfigError("solve: data length does not match ensemble");

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&t0]() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - t0)
        .count();
  };
  auto truth_err = [&](const HermitianFactor& x) {
    if (truth == nullptr || !opts.record_truth_error) return std::nan("");
    return factor_diff_frob_sq(x, *truth);
  };

  SolveResult out;
  out.trace.stop_reason = StopReason::kMaxIters;

  HermitianFactor x = init(y, ens, opts.rank);
  RealVector resid = y - forward(ens, x);
  double objective = 0.5 * resid.squaredNorm();
  out.trace.rows.push_back(
      {0, objective, std::nan(""), truth_err(x), elapsed_ms()});

  for (int k = 1; k <= opts.max_iters; ++k) {
    if (objective < opts.objective_floor) {
      out.trace.stop_reason = StopReason::kObjectiveFloor;
      break;
    }
    const Matrix g = adjoint(ens, resid);
    const TangentElement dir = tangent_project(x, g);
    const auto alpha = step_size(ens, dir);
    if (!alpha) {
      out.trace.stop_reason = StopReason::kZeroDirection;
      break;
    }
    const double prev_norm = x.frob_norm();
    const RetractResult step = retract(x, dir, *alpha, opts.rank);
    out.trace.rank_collapsed |= step.collapsed;
    x = step.factor;
    resid = y - forward(ens, x);
    objective = 0.5 * resid.squaredNorm();
    out.trace.rows.push_back(
        {k, objective, *alpha, truth_err(x), elapsed_ms()});
    const double rel_change =
        step.frob_change / std::max(prev_norm, 1e-300);
    if (rel_change < opts.stop_tol) {
      out.trace.stop_reason = StopReason::kSmallChange;
      break;
    }
  }
  out.estimate = x;
  return out;
}

}  // namespace rgdtomo
