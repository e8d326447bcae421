// Copyright 2026 The rgdtomo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <bit>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rgdtomo/errors.hpp"

namespace rgdtomo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline bool is_pauli_char(char c) {
  return c == 'I' || c == 'X' || c == 'Y' || c == 'Z';
}

inline void validate_label(const std::string& label) {
  if (label.empty()) throw ConfigError("empty Pauli label");
  if (label.size() > 30)
    throw ConfigError("Pauli label too long: " + std::to_string(label.size()) +
                      " qubits");
  for (char c : label) {
    if (!is_pauli_char(c))
      throw ConfigError("invalid Pauli label '" + label +
                        "' (allowed characters: I X Y Z)");
  }
}

/**
 * A Pauli word compiled to signed-permutation form.
 *
 * The word acts on basis states as W|j> = phase(j) |j ^ flip_mask> where the
 * phase is a power of i determined by three popcounts. Qubit 0 of the label
 * is the leftmost character and owns the most significant bit of the basis
 * index. All matrix-free expectation and application routines below run in
 * O(d) per word instead of O(d^2).
 */
struct CompiledPauli {
  int qubits = 0;
  std::uint64_t dim = 0;
  std::uint64_t flip_mask = 0;  // X and Y positions
  std::uint64_t y_mask = 0;
  std::uint64_t z_mask = 0;
  int y_count = 0;  // popcount(y_mask), cached
  std::string label;

  // Exponent e in phase(j) = i^e.
  // Each Y contributes i on bit 0 and -i (= i^3) on bit 1; each Z
  // contributes +1 on bit 0 and -1 (= i^2) on bit 1.
  int phase_exponent(std::uint64_t j) const {
    const int ny1 = std::popcount(j & y_mask);
    const int ny0 = y_count - ny1;
    const int nz1 = std::popcount(j & z_mask);
    return (ny0 + 3 * ny1 + 2 * nz1) & 3;
  }

  Complex phase(std::uint64_t j) const {
    static constexpr Complex kPow[4] = {
        {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    return kPow[phase_exponent(j)];
  }

  bool is_identity() const { return flip_mask == 0 && z_mask == 0; }
};

inline CompiledPauli compile_pauli(const std::string& label) {
  validate_label(label);
  CompiledPauli p;
  p.qubits = static_cast<int>(label.size());
  p.dim = std::uint64_t{1} << p.qubits;
  p.label = label;
  for (int q = 0; q < p.qubits; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (p.qubits - 1 - q);
    switch (label[static_cast<std::size_t>(q)]) {
      case 'X':
        p.flip_mask |= bit;
        break;
      case 'Y':
        p.flip_mask |= bit;
        p.y_mask |= bit;
        break;
      case 'Z':
        p.z_mask |= bit;
        break;
      default:
        break;  // 'I'
    }
  }
  p.y_count = std::popcount(p.y_mask);
  return p;
}

/// All 4^k labels in lexicographic order (I < X < Y < Z per position).
inline std::vector<std::string> enumerate_all(int qubits) {
  if (qubits < 1) throw ConfigError("enumerate_all: qubits must be >= 1");
  if (qubits > 8)
    throw ConfigError("enumerate_all: refusing to enumerate beyond 8 qubits");
  static constexpr char kAlphabet[4] = {'I', 'X', 'Y', 'Z'};
  const std::uint64_t total = std::uint64_t{1} << (2 * qubits);
  std::vector<std::string> out;
  out.reserve(total);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::string label(static_cast<std::size_t>(qubits), 'I');
    for (int q = 0; q < qubits; ++q) {
      const auto sym = (idx >> (2 * (qubits - 1 - q))) & 3;
      label[static_cast<std::size_t>(q)] = kAlphabet[sym];
    }
    out.push_back(std::move(label));
  }
  return out;
}

/// W * v without materializing W.
inline Vector apply(const CompiledPauli& p, const Vector& v) {
  if (static_cast<std::uint64_t>(v.size()) != p.dim)
    throw ConfigError("apply: vector length does not match Pauli dimension");
  Vector out(v.size());
  for (std::uint64_t j = 0; j < p.dim; ++j) {
    out[static_cast<Eigen::Index>(j ^ p.flip_mask)] =
        p.phase(j) * v[static_cast<Eigen::Index>(j)];
  }
  return out;
}

/**
 * Tr(W X) for X given in eigenform X = U diag(lambda) U†.
 *
 * The trace of a Hermitian word against a Hermitian operator is real; the
 * accumulated imaginary part is checked against imag_tol and discarded.
 */
inline double expectation(const CompiledPauli& p, const Matrix& U,
                          const RealVector& lambda,
                          double imag_tol = 1e-10) {
  if (static_cast<std::uint64_t>(U.rows()) != p.dim)
    throw ConfigError("expectation: row count does not match Pauli dimension");
  if (U.cols() != lambda.size())
    throw ConfigError("expectation: eigenvalue count does not match columns");
  Complex acc(0.0, 0.0);
  for (Eigen::Index c = 0; c < U.cols(); ++c) {
    Complex col_acc(0.0, 0.0);
    for (std::uint64_t j = 0; j < p.dim; ++j) {
      const auto ji = static_cast<Eigen::Index>(j);
      const auto ti = static_cast<Eigen::Index>(j ^ p.flip_mask);
      col_acc += std::conj(U(ti, c)) * p.phase(j) * U(ji, c);
    }
    acc += lambda[c] * col_acc;
  }
  const double scale = std::max(1.0, std::abs(acc.real()));
  if (std::abs(acc.imag()) > imag_tol * scale)
    throw NumericError("expectation: imaginary part " +
                       std::to_string(acc.imag()) + " exceeds tolerance");
  return acc.real();
}

/// Tr(W M) for a dense operator M; the full complex value is returned.
inline Complex trace_with_dense(const CompiledPauli& p, const Matrix& M) {
  if (static_cast<std::uint64_t>(M.rows()) != p.dim || M.rows() != M.cols())
    throw ConfigError("trace_with_dense: operator shape mismatch");
  Complex acc(0.0, 0.0);
  for (std::uint64_t j = 0; j < p.dim; ++j) {
    const auto ji = static_cast<Eigen::Index>(j);
    const auto ti = static_cast<Eigen::Index>(j ^ p.flip_mask);
    acc += p.phase(j) * M(ji, ti);
  }
  return acc;
}

}  // namespace rgdtomo
