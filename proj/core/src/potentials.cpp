#include "langevin/potentials.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace langevin {

PotentialSpec make_gaussian(const Eigen::MatrixXd& precision,
                            const Eigen::VectorXd& mean) {
  if (precision.rows() != precision.cols())
    throw std::invalid_argument("make_gaussian: precision must be square");
  if (precision.rows() != mean.size())
    throw std::invalid_argument("make_gaussian: mean/precision dimension mismatch");
  if (!precision.isApprox(precision.transpose(), 1e-12))
    throw std::invalid_argument("make_gaussian: precision must be symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(precision);
  const Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() <= 0.0) {
    std::ostringstream os;
    os << "make_gaussian: precision not positive definite (eigenvalue "
       << ev.minCoeff() << ")";
    throw std::invalid_argument(os.str());
  }

  PotentialSpec spec;
  spec.dim = static_cast<int>(mean.size());
  spec.m = ev.minCoeff();
  spec.M = ev.maxCoeff();
  spec.minimizer = mean;
  spec.f_min = 0.0;
  const Eigen::MatrixXd A = precision;
  const Eigen::VectorXd mu = mean;
  spec.value = [A, mu](const Eigen::VectorXd& th) {
    const Eigen::VectorXd d = th - mu;
    return 0.5 * d.dot(A * d);
  };
  spec.grad = [A, mu](const Eigen::VectorXd& th) -> Eigen::VectorXd {
    return A * (th - mu);
  };
  spec.hessian = A;
  return spec;
}

PotentialSpec make_logistic(const Eigen::MatrixXd& design,
                            const Eigen::VectorXd& labels, double ridge) {
  const auto n = design.rows();
  const auto p = design.cols();
  if (labels.size() != n)
    throw std::invalid_argument("make_logistic: labels/design dimension mismatch");
  if (ridge <= 0.0) throw std::invalid_argument("make_logistic: ridge must be > 0");
  for (Eigen::Index i = 0; i < n; ++i)
    if (labels(i) != 0.0 && labels(i) != 1.0)
      throw std::invalid_argument("make_logistic: labels must be 0 or 1");

  const Eigen::MatrixXd X = design;
  const Eigen::VectorXd y = labels;
  const double lam = ridge;

  auto raw_value = [X, y, lam](const Eigen::VectorXd& th) {
    const Eigen::VectorXd z = X * th;
    double s = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      // log(1+e^z) computed without overflow for large |z|.
      const double zi = z(i);
      s += (zi > 0 ? zi + std::log1p(std::exp(-zi)) : std::log1p(std::exp(zi)));
      s -= y(i) * zi;
    }
    return s + 0.5 * lam * th.squaredNorm();
  };
  auto grad_fn = [X, y, lam](const Eigen::VectorXd& th) -> Eigen::VectorXd {
    const Eigen::VectorXd z = X * th;
    Eigen::VectorXd sig(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i)
      sig(i) = 1.0 / (1.0 + std::exp(-z(i)));
    return X.transpose() * (sig - y) + lam * th;
  };

  // Damped Newton for the minimizer; the problem is lam-strongly convex so
  // this converges from anywhere.
  Eigen::VectorXd th = Eigen::VectorXd::Zero(p);
  double gn = grad_fn(th).norm();
  for (int it = 0; it < 200 && gn > 1e-12; ++it) {
    const Eigen::VectorXd z = X * th;
    Eigen::VectorXd w(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double s = 1.0 / (1.0 + std::exp(-z(i)));
      w(i) = s * (1.0 - s);
    }
    Eigen::MatrixXd H = X.transpose() * w.asDiagonal() * X;
    H.diagonal().array() += lam;
    const Eigen::VectorXd g = grad_fn(th);
    const Eigen::VectorXd step = H.ldlt().solve(g);
    double t = 1.0;
    const double f0 = raw_value(th);
    while (t > 1e-8 && raw_value(th - t * step) > f0 - 1e-4 * t * g.dot(step))
      t *= 0.5;
    th -= t * step;
    gn = grad_fn(th).norm();
  }
  if (gn > 1e-10) {
    std::ostringstream os;
    os << "make_logistic: Newton solve did not converge (gradient norm " << gn << ")";
    throw std::runtime_error(os.str());
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X.transpose() * X);

  PotentialSpec spec;
  spec.dim = static_cast<int>(p);
  spec.m = lam;
  spec.M = lam + 0.25 * es.eigenvalues().maxCoeff();
  spec.minimizer = th;
  spec.f_min = 0.0;
  const double fstar = raw_value(th);
  spec.value = [raw_value, fstar](const Eigen::VectorXd& t2) {
    return raw_value(t2) - fstar;
  };
  spec.grad = grad_fn;
  return spec;
}

double check_gradient_fd(const PotentialSpec& pot, const Eigen::VectorXd& theta,
                         double delta) {
  if (delta <= 0.0) throw std::invalid_argument("check_gradient_fd: delta must be > 0");
  const Eigen::VectorXd g = pot.grad(theta);
  double worst = 0.0;
  Eigen::VectorXd t = theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    t(i) = theta(i) + delta;
    const double fp = pot.value(t);
    t(i) = theta(i) - delta;
    const double fm = pot.value(t);
    t(i) = theta(i);
    worst = std::max(worst, std::abs((fp - fm) / (2.0 * delta) - g(i)));
  }
  return worst;
}

}  // namespace langevin
