// Copyright 2026 The rgdtomo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cmath>

#include "rgdtomo/errors.hpp"
#include "rgdtomo/pauli.hpp"

namespace rgdtomo {

/**
 * Hermitian operator in eigenform X = U diag(lambda) U†.
 *
 * U has orthonormal columns; lambda is real and may carry zeros or negative
 * entries (iterates are not forced positive). The factored form is the only
 * representation the solver ever stores; densify() exists for diagnostics
 * and small-scale tests.
 */
struct HermitianFactor {
  Matrix U;
  RealVector lambda;

  Eigen::Index dim() const { return U.rows(); }
  Eigen::Index cols() const { return U.cols(); }

  double frob_norm() const { return lambda.norm(); }
  double trace() const { return lambda.sum(); }

  // Columns whose eigenvalue is nonzero relative to the largest magnitude.
  int rank(double rel_tol = 1e-12) const {
    if (lambda.size() == 0) return 0;
    const double top = lambda.cwiseAbs().maxCoeff();
    if (top == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
      if (std::abs(lambda[i]) > rel_tol * top) ++r;
    return r;
  }

  double orthonormality_defect() const {
    if (U.cols() == 0) return 0.0;
    return (U.adjoint() * U - Matrix::Identity(U.cols(), U.cols()))
        .cwiseAbs()
        .maxCoeff();
  }

  Matrix densify() const {
    if (U.cols() == 0) return Matrix::Zero(U.rows(), U.rows());
    return U * lambda.asDiagonal() * U.adjoint();
  }

  static HermitianFactor zero(Eigen::Index dim) {
    return {Matrix::Zero(dim, 0), RealVector::Zero(0)};
  }
};

// ||a - b||_F^2 computed in the joint column span, never at d x d.
inline double factor_diff_frob_sq(const HermitianFactor& a,
                                  const HermitianFactor& b) {
  if (a.dim() != b.dim())
    throw ConfigError("factor_diff_frob_sq: dimension mismatch");
  const auto ra = a.cols();
  const auto rb = b.cols();
  const auto w = ra + rb;
  if (w == 0) return 0.0;
  Matrix joint(a.dim(), w);
  if (ra > 0) joint.leftCols(ra) = a.U;
  if (rb > 0) joint.rightCols(rb) = b.U;
  Eigen::HouseholderQR<Matrix> qr(joint);
  const Matrix t = qr.householderQ() * Matrix::Identity(a.dim(), w);
  Matrix m = Matrix::Zero(w, w);
  if (ra > 0) {
    const Matrix ca = t.adjoint() * a.U;
    m += ca * a.lambda.asDiagonal() * ca.adjoint();
  }
  if (rb > 0) {
    const Matrix cb = t.adjoint() * b.U;
    m -= cb * b.lambda.asDiagonal() * cb.adjoint();
  }
  return m.squaredNorm();
}

inline void check_factor(const HermitianFactor& f, double tol = 1e-8) {
  if (f.U.cols() != f.lambda.size())
    throw ConfigError("factor: eigenvalue count does not match column count");
  if (f.orthonormality_defect() > tol)
    throw NumericError("factor: columns are not orthonormal");
}

}  // namespace rgdtomo
