// Copyright 2026 The rgdtomo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "rgdtomo/errors.hpp"
#include "rgdtomo/rng.hpp"
#include "rgdtomo/sensing.hpp"
#include "rgdtomo/state.hpp"

namespace rgdtomo {

/** Measurement data for one ensemble: either exact traces or shot averages. */
struct MeasurementVector {
  RealVector y;
  long shots = 0;       // shots per observable; 0 when exact
  bool exact = false;
  std::uint64_t seed = 0;
};

/**
 * Two-outcome shot estimate of a single expectation value.
 *
 * Each shot measures the projector pair (I +- S)/2 and reports +1 or -1; the
 * estimate is the average of l outcomes.
 */
inline double measure_expectation(const DensityState& state,
                                  const CompiledPauli& p, long shots,
                                  Rng& rng) {
  if (shots < 1) throw ConfigError("measure_expectation: shots must be >= 1");
  const double tr = expectation(p, state.factor.U, state.factor.lambda);
  const double p_plus = std::clamp(0.5 * (1.0 + tr), 0.0, 1.0);
  long plus = 0;
  for (long s = 0; s < shots; ++s)
    if (rng.bernoulli(p_plus)) ++plus;
  return static_cast<double>(2 * plus - shots) / static_cast<double>(shots);
}

/**
 * Shot-noise measurement of every ensemble entry.
 *
 * Observable i draws from its own substream derived from (seed, i), so the
 * result is independent of processing order.
 */
inline MeasurementVector build_measurement(const DensityState& state,
                                           const SensingEnsemble& ens,
                                           long shots, std::uint64_t seed) {
  if (static_cast<std::uint64_t>(state.factor.dim()) != ens.dim)
    throw ConfigError("build_measurement: state and ensemble dimensions "
                      "differ");
  MeasurementVector mv;
  mv.y.resize(ens.m);
  mv.shots = shots;
  mv.seed = seed;
  for (int i = 0; i < ens.m; ++i) {
    Rng rng(derive_seed(seed, streams::kMeasurement,
                        static_cast<std::uint64_t>(i)));
    mv.y[i] = ens.scale *
              measure_expectation(state, ens.paulis[static_cast<std::size_t>(i)],
                                  shots, rng);
  }
  return mv;
}

inline MeasurementVector exact_measurement(const DensityState& state,
                                           const SensingEnsemble& ens) {
  MeasurementVector mv;
  mv.y = forward(ens, state.factor);
  mv.exact = true;
  return mv;
}

/**
 * High-probability bound on the operator norm of the adjointed shot noise,
 * lambda = sqrt(C d (d+1) ln d / (m l)). With constant C the bound fails
 * with probability at most d^(1-C).
 */
inline double noise_bound_lambda(std::uint64_t dim, int m, long shots,
                                 double c = 1.0) {
  if (dim < 2 || m < 1 || shots < 1 || c <= 0.0)
    throw ConfigError("noise_bound_lambda: bad arguments");
  const double d = static_cast<double>(dim);
  return std::sqrt(c * d * (d + 1.0) * std::log(d) /
                   (static_cast<double>(m) * static_cast<double>(shots)));
}

// --- computational-basis counts ------------------------------------------

enum class CountsConvention { kStdBasis, kPaper };

inline std::string to_string(CountsConvention c) {
  return c == CountsConvention::kStdBasis ? "std" : "paper";
}

inline CountsConvention counts_convention_from_string(const std::string& s) {
  if (s == "std") return CountsConvention::kStdBasis;
  if (s == "paper") return CountsConvention::kPaper;
  throw ConfigError("unknown counts convention '" + s + "'");
}

/**
 * Decodes bitstring counts into an expectation estimate for one word.
 *
 * Counts are assumed to come from measuring the word after basis rotation,
 * so outcome bits on the word's support carry its eigenvalue. Under the
 * standard convention a 1 bit contributes -1; the alternative convention
 * flips that sign, which multiplies the estimate by (-1)^|support|.
 */
inline double decode_counts(const std::map<std::string, long>& counts,
                            const std::string& label,
                            CountsConvention convention) {
  validate_label(label);
  long total = 0;
  double acc = 0.0;
  for (const auto& [bits, count] : counts) {
    if (bits.size() != label.size())
      throw ConfigError("decode_counts: bitstring length does not match "
                        "label");
    if (count < 0) throw ConfigError("decode_counts: negative count");
    int ones_on_support = 0;
    for (std::size_t q = 0; q < bits.size(); ++q) {
      if (bits[q] != '0' && bits[q] != '1')
        throw ConfigError("decode_counts: bitstring must be over {0,1}");
      if (label[q] != 'I' && bits[q] == '1') ++ones_on_support;
    }
    int support = 0;
    for (char c : label)
      if (c != 'I') ++support;
    const int chi = (convention == CountsConvention::kStdBasis)
                        ? ones_on_support
                        : support - ones_on_support;
    acc += static_cast<double>(count) * ((chi % 2 == 0) ? 1.0 : -1.0);
    total += count;
  }
  if (total <= 0) throw ConfigError("decode_counts: no shots recorded");
  return acc / static_cast<double>(total);
}

/// Samples computational-basis outcomes; keys are MSB-first bitstrings.
inline std::map<std::string, long> sample_computational_counts(
    const DensityState& state, long shots, Rng& rng) {
  if (shots < 1)
    throw ConfigError("sample_computational_counts: shots must be >= 1");
  const RealVector p = computational_probabilities(state);
  RealVector cdf(p.size());
  double run = 0.0;
  for (Eigen::Index b = 0; b < p.size(); ++b) {
    run += p[b];
    cdf[b] = run;
  }
  cdf[p.size() - 1] = 1.0;
  std::map<std::string, long> counts;
  for (long s = 0; s < shots; ++s) {
    const double u = rng.uniform();
    const auto* begin = cdf.data();
    const auto* it = std::upper_bound(begin, begin + cdf.size(), u);
    auto b = static_cast<std::uint64_t>(it - begin);
    std::string bits(static_cast<std::size_t>(state.qubits), '0');
    for (int q = 0; q < state.qubits; ++q)
      if ((b >> (state.qubits - 1 - q)) & 1)
        bits[static_cast<std::size_t>(q)] = '1';
    ++counts[bits];
  }
  return counts;
}

}  // namespace rgdtomo
