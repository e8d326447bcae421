// Copyright 2026 The rgdtomo Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <vector>

#include "rgdtomo/errors.hpp"

namespace rgdtomo {

/**
 * Problem constants feeding the convergence certificates.
 *
 * r, kappa and the extreme nonzero eigenvalues describe the target state;
 * lambda is the high-probability noise level; the deltas are restricted
 * isometry constants at ranks 2r and 3r.
 */
struct BoundInputs {
  int r = 1;
  double kappa = 1.0;
  double sigma1 = 1.0;
  double sigma_r = 1.0;
  double lambda = 0.0;
  double delta2r = 0.0;
  double delta3r = 0.0;
};

inline void validate(const BoundInputs& in) {
  if (in.r < 1) throw ConfigError("bounds: r must be >= 1");
  if (in.sigma_r <= 0.0 || in.sigma1 < in.sigma_r)
    throw ConfigError("bounds: need sigma1 >= sigma_r > 0");
  if (std::abs(in.kappa - in.sigma1 / in.sigma_r) >
      1e-9 * std::max(1.0, in.kappa))
    throw ConfigError("bounds: kappa must equal sigma1 / sigma_r");
  if (in.lambda < 0.0) throw ConfigError("bounds: lambda must be >= 0");
  if (in.delta2r < 0.0 || in.delta2r >= 1.0 || in.delta3r < 0.0 ||
      in.delta3r >= 1.0)
    throw ConfigError("bounds: deltas must lie in [0, 1)");
}

// Derived contraction ingredients.
inline double bound_theta(const BoundInputs& in) {
  return (4.0 * in.delta2r + 2.0 * in.delta3r) / (1.0 - in.delta2r);
}
inline double bound_eta(const BoundInputs& in) {
  return 4.0 * in.delta2r * std::sqrt(static_cast<double>(in.r)) * in.kappa;
}
inline double bound_phi(const BoundInputs& in) {
  return 4.0 * std::sqrt(2.0 * static_cast<double>(in.r)) * in.lambda /
         in.sigma_r;
}

/**
 * Coupled recursion for the per-iteration contraction factors.
 *
 * gamma_0 = theta + eta + phi; for k >= 1,
 *   gamma_k = theta + (eta + phi) prod_{j<k} gamma_j
 *           + (phi / (1 - delta2r)) mu_k,
 * with mu_1 = 1 and mu_(k+1) = 1 + gamma_k mu_k.
 */
struct GammaSeries {
  std::vector<double> gammas;  // gammas[k] = gamma_k
  std::vector<double> mus;     // mus[k] = mu_(k+1)
};

inline GammaSeries gamma_recursion(const BoundInputs& in, int steps) {
  validate(in);
  if (steps < 1) throw ConfigError("gamma_recursion: steps must be >= 1");
  const double theta = bound_theta(in);
  const double eta = bound_eta(in);
  const double phi = bound_phi(in);
  GammaSeries out;
  out.gammas.push_back(theta + eta + phi);
  out.mus.push_back(1.0);  // mu_1
  double prod = out.gammas[0];
  double mu = 1.0;
  for (int k = 1; k < steps; ++k) {
    const double g =
        theta + (eta + phi) * prod + phi / (1.0 - in.delta2r) * mu;
    mu = 1.0 + g * mu;
    out.gammas.push_back(g);
    out.mus.push_back(mu);
    prod *= g;
  }
  return out;
}

/**
 * Certificate term A_k: if it stays at or below a candidate gamma_bar for
 * the given k, every later contraction factor is bounded by gamma_bar.
 */
inline double certificate_value(const BoundInputs& in, int k,
                                double gamma_bar) {
  validate(in);
  if (k < 1) throw ConfigError("certificate_value: k must be >= 1");
  if (gamma_bar <= 0.0 || gamma_bar >= 1.0)
    throw ConfigError("certificate_value: gamma_bar must lie in (0, 1)");
  const auto series = gamma_recursion(in, k);
  double prod = 1.0;
  for (double g : series.gammas) prod *= g;
  return bound_theta(in) + (bound_eta(in) + bound_phi(in)) * prod +
         bound_phi(in) / (1.0 - in.delta3r) / (1.0 - gamma_bar);
}

inline double error_bound_asymptote(const BoundInputs& in, double gamma_bar) {
  validate(in);
  if (gamma_bar <= 0.0 || gamma_bar >= 1.0)
    throw ConfigError("error_bound_asymptote: gamma_bar must lie in (0, 1)");
  return 2.0 * std::sqrt(2.0 * static_cast<double>(in.r)) * in.lambda /
         ((1.0 - in.delta3r) * (1.0 - gamma_bar));
}

/**
 * Frobenius error bound after each iteration: the initial error shrunk by
 * gamma_bar per step plus the noise asymptote. Element k of the result is
 * the bound at iteration k, starting at k = 0.
 */
inline std::vector<double> error_bound_series(const BoundInputs& in,
                                              double gamma_bar,
                                              double init_error, int iters) {
  if (init_error < 0.0)
    throw ConfigError("error_bound_series: init_error must be >= 0");
  if (iters < 0) throw ConfigError("error_bound_series: iters must be >= 0");
  const double asym = error_bound_asymptote(in, gamma_bar);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(iters) + 1);
  double decayed = init_error;
  for (int k = 0; k <= iters; ++k) {
    out.push_back(decayed + asym);
    decayed *= gamma_bar;
  }
  return out;
}

/**
 * Iterations needed to reach the noise floor up to constants:
 * k* = ln(2 C0 ||rho||_F / (r kappa lambda) + 2 sqrt 2) - ln(C2 - C1),
 * all over ln(1 / gamma_bar).
 */
inline double iteration_estimate(const BoundInputs& in, double gamma_bar,
                                 double rho_frob, double c0 = 1.0,
                                 double c1 = 4.0, double c2 = 8.0) {
  validate(in);
  if (gamma_bar <= 0.0 || gamma_bar >= 1.0)
    throw ConfigError("iteration_estimate: gamma_bar must lie in (0, 1)");
  if (in.lambda <= 0.0)
    throw ConfigError("iteration_estimate: needs a positive noise level");
  if (rho_frob <= 0.0)
    throw ConfigError("iteration_estimate: rho_frob must be positive");
  if (c2 <= c1)
    throw ConfigError("iteration_estimate: requires c2 > c1");
  const double num =
      std::log(2.0 * c0 * rho_frob /
                   (static_cast<double>(in.r) * in.kappa * in.lambda) +
               2.0 * std::sqrt(2.0)) -
      std::log(c2 - c1);
  return num / std::log(1.0 / gamma_bar);
}

/// Noiseless analogue: iterations to reach relative accuracy eps.
inline double iteration_estimate_noiseless(int r, double kappa, double eps,
                                           double gamma_bar,
                                           double c0 = 1.0) {
  if (r < 1 || kappa < 1.0 || eps <= 0.0 || c0 <= 0.0)
    throw ConfigError("iteration_estimate_noiseless: bad arguments");
  if (gamma_bar <= 0.0 || gamma_bar >= 1.0)
    throw ConfigError("iteration_estimate_noiseless: gamma_bar must lie in "
                      "(0, 1)");
  return std::log(c0 / (std::sqrt(static_cast<double>(r)) * kappa * eps)) /
         std::log(1.0 / gamma_bar);
}

}  // namespace rgdtomo
