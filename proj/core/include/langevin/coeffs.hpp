#pragma once

// Scale-free discretization coefficients of the exponential-integrator
// (Ornstein-Uhlenbeck) schemes, and the exact correlated noise covariances
// consumed by the kinetic samplers. All functions of eta = gamma*h are
// evaluated with series fallbacks so they stay accurate down to eta ~ 1e-12.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "langevin/rng.hpp"

namespace langevin {

// (1 - e^{-x}) / x, with psi(0) = 1. Throws std::domain_error for x < 0.
double psi(double x);

struct StepCoefficients {
  double eta;           // gamma * h
  double alpha;         // (1 - e^{-eta}) / eta
  double beta;          // (e^{-eta} - 1 + eta) / eta^2
  double sigma2;        // (1 - e^{-2 eta}) / (2 eta)
  double sigma_tilde2;  // position-noise variance normalizer, see klmc_noise_cov
};

// Coefficients of the one-step kinetic update. Throws for eta <= 0.
StepCoefficients klmc_coeffs(double eta);

// sigma_tilde^2 alone (defined as gamma * Var_theta / (2 eta^3), where
// Var_theta is the per-coordinate variance of the exact OU position noise).
double sigma_tilde2(double eta);

// Per-coordinate covariance of the Gaussian stochastic integrals driving one
// step. dim == 2: (velocity noise, position noise) for the plain kinetic
// step. dim == 3: (midpoint position noise, full-step position noise,
// full-step velocity noise), conditional on the midpoint fraction u.
struct NoiseCovariance {
  int dim;
  Eigen::MatrixXd entries;  // dim x dim, symmetric
  Eigen::MatrixXd chol;     // lower-triangular factor
  std::optional<double> u;  // present iff dim == 3
  bool jittered = false;    // true if a PSD jitter was needed to factor
};

// Covariance of (sqrt2 * gamma * int_0^h e^{-gamma(h-s)} dW,
//                sqrt2 *         int_0^h (1 - e^{-gamma(h-s)}) dW).
NoiseCovariance klmc_noise_cov(double eta, double gamma);

// Covariance of (sqrt2 * int_0^{uh} (1 - e^{-gamma(uh-s)}) dW,
//                sqrt2 * int_0^{h}  (1 - e^{-gamma(h-s)})  dW,
//                sqrt2 * gamma * int_0^h e^{-gamma(h-s)} dW),
// all driven by the same Brownian path. Throws for u outside (0, 1].
NoiseCovariance rklmc_noise_cov(double eta, double gamma, double u);

// Draws `cov.dim` correlated Gaussian vectors in R^p (iid across the p axis,
// joint per-coordinate covariance cov.entries).
std::vector<Eigen::VectorXd> sample_noise(const NoiseCovariance& cov, int p, Philox& rng);

}  // namespace langevin
