// Copyright 2026 The rgdtomo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <optional>

#include "rgdtomo/errors.hpp"
#include "rgdtomo/factor.hpp"
#include "rgdtomo/state.hpp"

namespace rgdtomo {

/**
 * Estimate-versus-truth summary. Both the plain and squared Frobenius
 * errors are carried everywhere: published figures are ambiguous about
 * which one they plot, so artifacts record both.
 */
struct Metrics {
  double frob_err = 0.0;
  double frob_err_sq = 0.0;
  double nuclear_err = 0.0;
  double trace_dev = 0.0;  // |Tr(estimate) - 1|
  double min_eig = 0.0;
  std::optional<double> fidelity;  // only when the truth is pure
};

inline Metrics compute_metrics(const HermitianFactor& estimate,
                               const HermitianFactor& truth) {
  if (estimate.dim() != truth.dim())
    throw ConfigError("compute_metrics: dimension mismatch");
  Metrics out;

  const auto ra = estimate.cols();
  const auto rb = truth.cols();
  const auto w = ra + rb;
  if (w > 0) {
    // Work in the joint column span; the difference never exceeds rank w.
    Matrix joint(estimate.dim(), w);
    if (ra > 0) joint.leftCols(ra) = estimate.U;
    if (rb > 0) joint.rightCols(rb) = truth.U;
    Eigen::HouseholderQR<Matrix> qr(joint);
    const Matrix t = qr.householderQ() * Matrix::Identity(estimate.dim(), w);
    Matrix diff = Matrix::Zero(w, w);
    if (ra > 0) {
      const Matrix c = t.adjoint() * estimate.U;
      diff += c * estimate.lambda.asDiagonal() * c.adjoint();
    }
    if (rb > 0) {
      const Matrix c = t.adjoint() * truth.U;
      diff -= c * truth.lambda.asDiagonal() * c.adjoint();
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(diff);
    out.frob_err = es.eigenvalues().norm();
    out.frob_err_sq = es.eigenvalues().squaredNorm();
    out.nuclear_err = es.eigenvalues().cwiseAbs().sum();
  }

  out.trace_dev = std::abs(estimate.trace() - 1.0);
  double min_eig = 0.0;  // implicit zero eigenvalues of the thin factor
  if (estimate.cols() == estimate.dim() && estimate.cols() > 0)
    min_eig = estimate.lambda.minCoeff();
  else if (estimate.cols() > 0)
    min_eig = std::min(0.0, estimate.lambda.minCoeff());
  out.min_eig = min_eig;

  if (truth.rank() == 1) {
    // Fidelity against a pure state is the overlap <psi| estimate |psi>.
    Eigen::Index top = 0;
    truth.lambda.cwiseAbs().maxCoeff(&top);
    const Vector psi = truth.U.col(top);
    double f = 0.0;
    for (Eigen::Index c = 0; c < estimate.cols(); ++c)
      f += estimate.lambda[c] * std::norm(psi.dot(estimate.U.col(c)));
    out.fidelity = f;
  }
  return out;
}

/**
 * Projects an estimate onto physical density matrices the cheap way: clip
 * negative eigenvalues to zero and renormalize the trace to one.
 */
inline DensityState psd_normalize(const HermitianFactor& f) {
  RealVector lam = f.lambda.cwiseMax(0.0);
  const double total = lam.sum();
  if (total <= 0.0)
    throw NumericError("psd_normalize: no positive eigenvalue mass");
  lam /= total;
  DensityState s;
  s.kind = StateKind::kCustom;
  s.qubits = 0;
  const auto d = f.dim();
  for (auto dd = d; dd > 1; dd >>= 1) ++s.qubits;
  s.rank = 0;
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    if (lam[i] > 0.0) ++s.rank;
  s.factor = {f.U, lam};
  return s;
}

}  // namespace rgdtomo
