// Copyright 2026 The rgdtomo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "rgdtomo/errors.hpp"
#include "rgdtomo/factor.hpp"
#include "rgdtomo/pauli.hpp"
#include "rgdtomo/rng.hpp"

namespace rgdtomo {

/**
 * Sampled Pauli sensing map.
 *
 * The map sends X to the vector with entries sqrt(d/m) Tr(S_i X); its
 * adjoint sends y to sqrt(d/m) sum_i y_i S_i. Words are sampled uniformly,
 * identity included, so the adjoint composed with the map is the identity in
 * expectation.
 */
struct SensingEnsemble {
  int qubits = 0;
  std::uint64_t dim = 0;
  int m = 0;
  std::uint64_t seed = 0;
  bool with_replacement = true;
  std::vector<CompiledPauli> paulis;
  double scale = 0.0;  // sqrt(d/m)

  void finalize() {
    dim = std::uint64_t{1} << qubits;
    m = static_cast<int>(paulis.size());
    scale = std::sqrt(static_cast<double>(dim) / static_cast<double>(m));
  }
};

inline SensingEnsemble ensemble_from_labels(
    const std::vector<std::string>& labels, std::uint64_t seed = 0,
    bool with_replacement = true) {
  if (labels.empty()) throw ConfigError("ensemble: need at least one label");
  SensingEnsemble ens;
  ens.qubits = static_cast<int>(labels.front().size());
  ens.seed = seed;
  ens.with_replacement = with_replacement;
  ens.paulis.reserve(labels.size());
  for (const auto& label : labels) {
    if (static_cast<int>(label.size()) != ens.qubits)
      throw ConfigError("ensemble: labels disagree on qubit count");
    ens.paulis.push_back(compile_pauli(label));
  }
  ens.finalize();
  return ens;
}

inline SensingEnsemble sample_ensemble(int qubits, int m, std::uint64_t seed,
                                       bool with_replacement = true) {
  if (qubits < 1) throw ConfigError("sample_ensemble: qubits must be >= 1");
  if (m < 1) throw ConfigError("sample_ensemble: m must be >= 1");
  Rng rng(derive_seed(seed, streams::kEnsemble));
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(m));
  if (with_replacement) {
    if (qubits > 30)
      throw ConfigError("sample_ensemble: qubit count out of range");
    static constexpr char kAlphabet[4] = {'I', 'X', 'Y', 'Z'};
    for (int i = 0; i < m; ++i) {
      std::string label(static_cast<std::size_t>(qubits), 'I');
      for (int q = 0; q < qubits; ++q)
        label[static_cast<std::size_t>(q)] = kAlphabet[rng.below(4)];
      labels.push_back(std::move(label));
    }
  } else {
    // Distinct draws need the full label set in memory; same cap as
    // enumerate_all.
    auto all = enumerate_all(qubits);
    if (static_cast<std::size_t>(m) > all.size())
      throw ConfigError("sample_ensemble: m exceeds 4^qubits without "
                        "replacement");
    for (int i = 0; i < m; ++i) {
      const auto j = i + static_cast<int>(rng.below(all.size() -
                                                    static_cast<std::size_t>(i)));
      std::swap(all[static_cast<std::size_t>(i)],
                all[static_cast<std::size_t>(j)]);
      labels.push_back(all[static_cast<std::size_t>(i)]);
    }
  }
  auto ens = ensemble_from_labels(labels, seed, with_replacement);
  return ens;
}

/// All 4^k words once; makes the map an exact isometry.
inline SensingEnsemble complete_ensemble(int qubits) {
  return ensemble_from_labels(enumerate_all(qubits), 0, false);
}

inline std::vector<std::string> ensemble_labels(const SensingEnsemble& ens) {
  std::vector<std::string> out;
  out.reserve(ens.paulis.size());
  for (const auto& p : ens.paulis) out.push_back(p.label);
  return out;
}

// FNV-1a over the defining data; identifies an ensemble in artifacts.
inline std::uint64_t ensemble_hash(const SensingEnsemble& ens) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  auto eat = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xFF;
      h *= 0x100000001B3ull;
    }
  };
  eat(static_cast<std::uint64_t>(ens.qubits));
  eat(static_cast<std::uint64_t>(ens.m));
  eat(ens.seed);
  eat(ens.with_replacement ? 1 : 0);
  for (const auto& p : ens.paulis) {
    for (char c : p.label) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ull;
    }
  }
  return h;
}

inline RealVector forward(const SensingEnsemble& ens,
                          const HermitianFactor& x) {
  if (static_cast<std::uint64_t>(x.dim()) != ens.dim)
    throw ConfigError("forward: operator dimension does not match ensemble");
  RealVector y(ens.m);
  for (int i = 0; i < ens.m; ++i)
    y[i] = ens.scale *
           expectation(ens.paulis[static_cast<std::size_t>(i)], x.U, x.lambda);
  return y;
}

inline RealVector forward_dense(const SensingEnsemble& ens, const Matrix& x,
                                double imag_tol = 1e-10) {
  if (static_cast<std::uint64_t>(x.rows()) != ens.dim)
    throw ConfigError("forward: operator dimension does not match ensemble");
  RealVector y(ens.m);
  for (int i = 0; i < ens.m; ++i) {
    const Complex tr =
        trace_with_dense(ens.paulis[static_cast<std::size_t>(i)], x);
    if (std::abs(tr.imag()) > imag_tol * std::max(1.0, std::abs(tr.real())))
      throw NumericError("forward: trace has non-negligible imaginary part");
    y[i] = ens.scale * tr.real();
  }
  return y;
}

/**
 * Adjoint map: sqrt(d/m) sum_i y_i S_i, materialized densely.
 *
 * The result is exactly Hermitian in floating point. For each word, the
 * (a, b) and (b, a) contributions are s * phase and s * conj(phase) with s
 * real and phase in {1, i, -1, -i}; the two accumulation sequences are
 * componentwise mirrored, so IEEE addition keeps them conjugate.
 */
inline Matrix adjoint(const SensingEnsemble& ens, const RealVector& y) {
  if (y.size() != ens.m)
    throw ConfigError("adjoint: vector length does not match ensemble size");
  const auto d = static_cast<Eigen::Index>(ens.dim);
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < ens.m; ++i) {
    const auto& p = ens.paulis[static_cast<std::size_t>(i)];
    const double s = ens.scale * y[i];
    if (s == 0.0) continue;
    for (std::uint64_t j = 0; j < p.dim; ++j) {
      const auto ji = static_cast<Eigen::Index>(j);
      const auto ti = static_cast<Eigen::Index>(j ^ p.flip_mask);
      out(ti, ji) += s * p.phase(j);
    }
  }
  return out;
}

struct RipProbeResult {
  double delta_hat = 0.0;
  std::vector<double> samples;  // squared map norms of unit-norm inputs
};

/**
 * Monte Carlo restricted-isometry probe.
 *
 * Draws random rank-r operators with unit Frobenius norm and records
 * ||A(X)||^2; delta_hat is the largest observed deviation from 1. This is a
 * lower estimate of the true restricted isometry constant.
 */
inline RipProbeResult rip_probe(const SensingEnsemble& ens, int rank,
                                int trials, std::uint64_t seed) {
  if (rank < 1 || static_cast<std::uint64_t>(rank) > ens.dim)
    throw ConfigError("rip_probe: rank out of range");
  if (trials < 1) throw ConfigError("rip_probe: trials must be >= 1");
  const auto d = static_cast<Eigen::Index>(ens.dim);
  RipProbeResult res;
  res.samples.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, streams::kProbe, static_cast<std::uint64_t>(t)));
    Matrix g(d, rank);
    for (Eigen::Index j = 0; j < rank; ++j)
      for (Eigen::Index i = 0; i < d; ++i)
        g(i, j) = Complex(rng.normal(), rng.normal());
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix u = qr.householderQ() * Matrix::Identity(d, rank);
    RealVector lam(rank);
    for (int i = 0; i < rank; ++i) lam[i] = rng.normal();
    lam /= lam.norm();
    const double s = forward(ens, HermitianFactor{u, lam}).squaredNorm();
    res.samples.push_back(s);
    res.delta_hat = std::max(res.delta_hat, std::abs(s - 1.0));
  }
  return res;
}

}  // namespace rgdtomo
