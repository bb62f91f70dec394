#pragma once

// Potential-function abstraction: value, gradient, certified strong-convexity
// and smoothness constants, and a known minimizer. All potentials are shifted
// so that the minimum value is exactly zero.

#include <Eigen/Dense>
#include <functional>
#include <optional>

namespace langevin {

struct PotentialSpec {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;
  double m = 0.0;            // strong-convexity constant
  double M = 0.0;            // gradient Lipschitz constant
  Eigen::VectorXd minimizer;
  double f_min = 0.0;        // always 0 after the shift
  int dim = 0;
  // Set when the Hessian is constant (quadratic potential); lets the
  // one-step measurements average over the midpoint fraction exactly.
  std::optional<Eigen::MatrixXd> hessian;

  double kappa() const { return M / m; }
};

// f(theta) = 0.5 (theta - theta*)^T A (theta - theta*), A symmetric positive
// definite. m and M are the eigenvalue extremes of A. Throws if A is not SPD,
// naming the offending eigenvalue.
PotentialSpec make_gaussian(const Eigen::MatrixXd& precision,
                            const Eigen::VectorXd& mean);

// Ridge-regularized logistic regression negative log-posterior:
// f(theta) = sum_i log(1 + exp(x_i^T theta)) - y_i x_i^T theta
//            + (lambda/2) ||theta||^2, shifted so min f = 0.
// m = lambda, M = lambda + lambda_max(X^T X)/4. The minimizer is found by
// damped Newton to gradient norm <= 1e-12; non-convergence throws with the
// final gradient norm.
PotentialSpec make_logistic(const Eigen::MatrixXd& design,
                            const Eigen::VectorXd& labels, double ridge);

// Max over coordinates of |central finite difference of f - gradient
// component| at theta. Throws for delta <= 0.
double check_gradient_fd(const PotentialSpec& pot, const Eigen::VectorXd& theta,
                         double delta);

}  // namespace langevin
