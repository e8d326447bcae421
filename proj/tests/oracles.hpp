// Copyright 2026 The rgdtomo Authors
// SPDX-License-Identifier: Apache-2.0
//
// Slow reference implementations used only by the test suites. Everything
// here is built from first principles (explicit 2x2 matrices, Kronecker
// products, dense eigensolvers) and deliberately shares no code with the
// library under test.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <string>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Matrix pauli_1q(char c) {
  Matrix m(2, 2);
  const Complex i(0.0, 1.0);
  switch (c) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << 0, -i, i, 0;
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw std::invalid_argument("bad Pauli character");
  }
  return m;
}

// Dense matrix of a Pauli word, leftmost character on the leftmost Kronecker
// factor (most significant bit).
inline Matrix dense_pauli(const std::string& label) {
  Matrix acc = pauli_1q(label.at(0));
  for (std::size_t q = 1; q < label.size(); ++q)
    acc = kron(acc, pauli_1q(label.at(q)));
  return acc;
}

// --- random test data -----------------------------------------------------
// Uses std::mt19937 directly so oracle randomness is decoupled from the
// library's generator.

inline Matrix rand_complex(int rows, int cols, std::mt19937& gen) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = Complex(nd(gen), nd(gen));
  return m;
}

inline Matrix rand_orthonormal(int dim, int cols, std::mt19937& gen) {
  const Matrix g = rand_complex(dim, cols, gen);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(dim, cols);
}

inline Matrix rand_hermitian(int dim, std::mt19937& gen) {
  const Matrix g = rand_complex(dim, dim, gen);
  return 0.5 * (g + g.adjoint());
}

// Rank-r density matrix with eigenvalue ratio kappa between the largest and
// smallest nonzero eigenvalues.
inline std::pair<Matrix, RealVector> rand_density(int dim, int rank,
                                                  double kappa,
                                                  std::mt19937& gen) {
  const Matrix u = rand_orthonormal(dim, rank, gen);
  RealVector lam(rank);
  for (int i = 0; i < rank; ++i) {
    lam[i] = (rank == 1)
                 ? 1.0
                 : kappa + (1.0 - kappa) * static_cast<double>(i) /
                               static_cast<double>(rank - 1);
  }
  lam /= lam.sum();
  return {u, lam};
}

inline Matrix densify(const Matrix& u, const RealVector& lam) {
  return u * lam.asDiagonal() * u.adjoint();
}

// --- dense reference operations ------------------------------------------

// Best rank-r Hermitian approximation by eigenvalue magnitude.
inline Matrix dense_hard_threshold(const Matrix& m, int rank) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  const RealVector vals = es.eigenvalues();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(vals.size()));
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = static_cast<Eigen::Index>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return std::abs(vals[a]) > std::abs(vals[b]);
                   });
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (int i = 0; i < rank && i < static_cast<int>(order.size()); ++i) {
    const auto idx = order[static_cast<std::size_t>(i)];
    out += vals[idx] * es.eigenvectors().col(idx) *
           es.eigenvectors().col(idx).adjoint();
  }
  return out;
}

// Projection onto the tangent space of the rank-r manifold at U.
inline Matrix dense_tangent_project(const Matrix& u, const Matrix& g) {
  const Matrix pu = u * u.adjoint();
  return pu * g + g * pu - pu * g * pu;
}

// Least-squares slope of ys against xs.
inline double fit_slope(const std::vector<double>& xs,
                        const std::vector<double>& ys) {
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
