#pragma once

// Wasserstein-2 machinery: closed-form Gaussian W2, exact covariance
// recursions for the linear (Gaussian-target) chains, and sorted-sample
// empirical W2 against product targets.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "langevin/potentials.hpp"
#include "langevin/rng.hpp"

namespace langevin {

struct GaussianLaw {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// Bures-Wasserstein distance between Gaussian laws. Eigenvalues of the inner
// square roots are clipped at zero (the term is sensitive to tiny negatives).
// Throws std::invalid_argument on dimension mismatch or non-PSD input.
double w2_gaussian(const GaussianLaw& a, const GaussianLaw& b);

// Standard normal quantile (Wichura's AS241, ~1e-15 accurate). p in (0,1).
double normal_quantile(double p);

struct W2Trace {
  std::vector<std::int64_t> n;
  std::vector<double> w2_exact;
  std::vector<double> bound_total;  // empty if no bound function supplied
  bool valid = true;                // bound preconditions (caller-supplied)

  // CSV columns: n, w2_exact, bound_total, valid.
  std::string csv() const;
};

using BoundAt = std::function<double(std::int64_t n)>;

// Exact law of the overdamped chain on the Gaussian target N(theta*, A^{-1}):
// mu' = theta* + (I - hA)(mu - theta*), Sigma' = (I-hA) Sigma (I-hA)' + 2h I.
GaussianLaw lmc_gaussian_step(const Eigen::MatrixXd& A, const Eigen::VectorXd& theta_star,
                              double h, const GaussianLaw& law);

W2Trace lmc_gaussian_recursion(const Eigen::MatrixXd& A, const Eigen::VectorXd& theta_star,
                               double h, const GaussianLaw& init, std::int64_t n,
                               std::int64_t record_every = 1, const BoundAt& bound = {},
                               bool bound_valid = true);

// Joint law of (theta; v), stacked as a 2p vector.
struct JointGaussianLaw {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  int p = 0;
};

// init for theta = delta_{theta*}, v ~ N(0, gamma I).
JointGaussianLaw klmc_default_joint_init(const Eigen::VectorXd& theta_star, double gamma);

// One step of the exact affine recursion for the kinetic chain on the
// Gaussian target; noise covariance from klmc_noise_cov, Kronecker over
// coordinates.
JointGaussianLaw klmc_gaussian_step(const Eigen::MatrixXd& A,
                                    const Eigen::VectorXd& theta_star, double gamma,
                                    double h, const JointGaussianLaw& law);

GaussianLaw position_marginal(const JointGaussianLaw& law);
GaussianLaw velocity_marginal(const JointGaussianLaw& law);

W2Trace klmc_gaussian_recursion(const Eigen::MatrixXd& A, const Eigen::VectorXd& theta_star,
                                double gamma, double h, const JointGaussianLaw& init,
                                std::int64_t n, std::int64_t record_every = 1,
                                const BoundAt& bound = {}, bool bound_valid = true);

// Scalar-eigenvalue route: the 2x2 (theta, v) covariance recursion for one
// eigenvalue lambda of A, with zero-mean centered state. Returns the 2x2
// covariance after n steps starting from cov0.
Eigen::Matrix2d klmc_block_recursion(double lambda, double gamma, double h,
                                     const Eigen::Matrix2d& cov0, std::int64_t n);

// Empirical W2 against a product target given per-coordinate quantile
// functions, using plotting positions (i - 1/2) / R.
using Quantile = std::function<double(double)>;

double empirical_w2_product(const Eigen::MatrixXd& samples,
                            const std::vector<Quantile>& marginals);

// Quantile functions of a product Gaussian with the given means/variances.
std::vector<Quantile> gaussian_product_quantiles(const Eigen::VectorXd& mean,
                                                 const Eigen::VectorXd& variances);

struct BootstrapEstimate {
  double value = 0.0;  // point estimate on the full sample
  double se = 0.0;     // bootstrap standard error
};

BootstrapEstimate empirical_w2_bootstrap(const Eigen::MatrixXd& samples,
                                         const std::vector<Quantile>& marginals,
                                         int bootstrap_rounds, std::uint64_t seed);

struct MomentDiagnostics {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;  // unbiased
  std::optional<double> ef;  // mean potential value, if a potential was supplied
};

MomentDiagnostics moment_diagnostics(const Eigen::MatrixXd& samples,
                                     const PotentialSpec* pot = nullptr);

}  // namespace langevin
