// Copyright 2026 The rgdtomo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string>

#include "rgdtomo/errors.hpp"
#include "rgdtomo/factor.hpp"
#include "rgdtomo/rng.hpp"

namespace rgdtomo {

enum class StateKind { kHadamard, kGhz, kRandomKappa, kCustom };

inline std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::kHadamard:
      return "hadamard";
    case StateKind::kGhz:
      return "ghz";
    case StateKind::kRandomKappa:
      return "random_kappa";
    case StateKind::kCustom:
      return "custom";
  }
  return "custom";
}

inline StateKind state_kind_from_string(const std::string& s) {
  if (s == "hadamard") return StateKind::kHadamard;
  if (s == "ghz") return StateKind::kGhz;
  if (s == "random_kappa") return StateKind::kRandomKappa;
  if (s == "custom") return StateKind::kCustom;
  throw ConfigError("unknown state kind '" + s + "'");
}

/** A density operator plus the recipe that produced it. */
struct DensityState {
  StateKind kind = StateKind::kCustom;
  int qubits = 0;
  int rank = 1;
  double kappa = 1.0;
  std::uint64_t seed = 0;
  HermitianFactor factor;
};

namespace detail {

inline Matrix random_orthonormal(Eigen::Index dim, Eigen::Index cols,
                                 Rng& rng) {
  Matrix g(dim, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < dim; ++i)
      g(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(dim, cols);
}

}  // namespace detail

inline DensityState make_hadamard_state(int qubits) {
  if (qubits < 1) throw ConfigError("hadamard state: qubits must be >= 1");
  const auto d = Eigen::Index{1} << qubits;
  Matrix u(d, 1);
  u.setConstant(Complex(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
  RealVector lam(1);
  lam[0] = 1.0;
  DensityState s;
  s.kind = StateKind::kHadamard;
  s.qubits = qubits;
  s.factor = {u, lam};
  return s;
}

inline DensityState make_ghz_state(int qubits) {
  if (qubits < 1) throw ConfigError("ghz state: qubits must be >= 1");
  const auto d = Eigen::Index{1} << qubits;
  Matrix u = Matrix::Zero(d, 1);
  const double a = 1.0 / std::sqrt(2.0);
  u(0, 0) = a;
  u(d - 1, 0) = a;
  RealVector lam(1);
  lam[0] = 1.0;
  DensityState s;
  s.kind = StateKind::kGhz;
  s.qubits = qubits;
  s.factor = {u, lam};
  return s;
}

// Rank-r state with eigenvalues linearly spaced between kappa and 1 before
// normalization, so the nonzero condition number is exactly kappa.
inline DensityState make_random_state(int qubits, int rank, double kappa,
                                      std::uint64_t seed) {
  if (qubits < 1) throw ConfigError("random state: qubits must be >= 1");
  const auto d = Eigen::Index{1} << qubits;
  if (rank < 1 || rank > d)
    throw ConfigError("random state: rank must be in [1, 2^qubits]");
  if (kappa < 1.0) throw ConfigError("random state: kappa must be >= 1");
  Rng rng(derive_seed(seed, streams::kState));
  RealVector lam(rank);
  for (int i = 0; i < rank; ++i) {
    lam[i] = (rank == 1) ? 1.0
                         : kappa + (1.0 - kappa) * static_cast<double>(i) /
                                       static_cast<double>(rank - 1);
  }
  lam /= lam.sum();
  DensityState s;
  s.kind = StateKind::kRandomKappa;
  s.qubits = qubits;
  s.rank = rank;
  s.kappa = kappa;
  s.seed = seed;
  s.factor = {detail::random_orthonormal(d, rank, rng), lam};
  return s;
}

inline DensityState make_state(StateKind kind, int qubits, int rank,
                               double kappa, std::uint64_t seed) {
  switch (kind) {
    case StateKind::kHadamard:
      return make_hadamard_state(qubits);
    case StateKind::kGhz:
      return make_ghz_state(qubits);
    case StateKind::kRandomKappa:
      return make_random_state(qubits, rank, kappa, seed);
    case StateKind::kCustom:
      throw ConfigError("custom states cannot be constructed from a recipe");
  }
  throw ConfigError("unreachable state kind");
}

// Born probabilities of computational basis outcomes: p_b = <b| rho |b>.
inline RealVector computational_probabilities(const DensityState& s) {
  const auto d = s.factor.dim();
  RealVector p = RealVector::Zero(d);
  for (Eigen::Index c = 0; c < s.factor.cols(); ++c)
    p += s.factor.lambda[c] * s.factor.U.col(c).cwiseAbs2();
  // Guard tiny negative values from roundoff before sampling.
  for (Eigen::Index b = 0; b < d; ++b) p[b] = std::max(p[b], 0.0);
  const double total = p.sum();
  if (total <= 0.0) throw NumericError("state has no probability mass");
  return p / total;
}

}  // namespace rgdtomo
