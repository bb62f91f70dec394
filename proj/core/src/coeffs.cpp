#include "langevin/coeffs.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace langevin {

namespace {

// Series fallbacks switch at x <= kSeriesSwitch; cancellation in the direct
// expressions destroys double precision well before that point for beta and
// sigma_tilde2, so those two use a wider switch with more terms.
constexpr double kSeriesSwitch = 1e-3;

// beta(x) = (e^{-x} - 1 + x) / x^2 = sum_{k>=0} (-x)^k / (k+2)!
double beta_fn(double x) {
  if (x <= 0.5) {
    double term = 0.5;  // k = 0
    double sum = term;
    for (int k = 1; k <= 40; ++k) {
      term *= -x / (k + 2);
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
  }
  return (std::expm1(-x) + x) / (x * x);
}

}  // namespace

double psi(double x) {
  if (x < 0.0) throw std::domain_error("psi: argument must be nonnegative");
  if (x <= kSeriesSwitch) {
    // 1 - x/2 + x^2/6 - ... ; degree-8 truncation is exact to 1e-16 here.
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 8; ++k) {
      term *= -x / (k + 1);
      sum += term;
    }
    return sum;
  }
  return -std::expm1(-x) / x;
}

double sigma_tilde2(double eta) {
  if (eta <= 0.0) throw std::domain_error("sigma_tilde2: eta must be positive");
  if (eta <= 0.5) {
    // (2 eta - 3 + 4 e^{-eta} - e^{-2 eta}) / (2 eta^3)
    //   = sum_{k>=3} (-1)^k (4 - 2^k) / (2 k!) eta^{k-3}.
    double sum = 0.0;
    double sign = -1.0;      // (-1)^k at k = 3
    double pow2 = 8.0;       // 2^k at k = 3
    double fact = 6.0;       // k! at k = 3
    double etapow = 1.0;     // eta^{k-3}
    for (int k = 3; k <= 48; ++k) {
      const double term = sign * (4.0 - pow2) / (2.0 * fact) * etapow;
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum) && k > 4) break;
      sign = -sign;
      pow2 *= 2.0;
      fact *= (k + 1);
      etapow *= eta;
    }
    return sum;
  }
  const double num = 2.0 * eta + 4.0 * std::expm1(-eta) - std::expm1(-2.0 * eta);
  return num / (2.0 * eta * eta * eta);
}

StepCoefficients klmc_coeffs(double eta) {
  if (eta <= 0.0) throw std::domain_error("klmc_coeffs: eta must be positive");
  StepCoefficients c;
  c.eta = eta;
  c.alpha = psi(eta);
  c.beta = beta_fn(eta);
  c.sigma2 = psi(2.0 * eta);
  c.sigma_tilde2 = sigma_tilde2(eta);
  return c;
}

namespace {

Eigen::MatrixXd chol2(const Eigen::MatrixXd& v) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(2, 2);
  const double tr = v.trace();
  if (v(0, 0) < 0.0)
    throw std::runtime_error("klmc_noise_cov: negative velocity variance");
  l(0, 0) = std::sqrt(v(0, 0));
  l(1, 0) = l(0, 0) > 0.0 ? v(1, 0) / l(0, 0) : 0.0;
  double d = v(1, 1) - l(1, 0) * l(1, 0);
  if (d < -1e-12 * tr)
    throw std::runtime_error("klmc_noise_cov: covariance is not PSD");
  l(1, 1) = std::sqrt(std::max(d, 0.0));
  return l;
}

}  // namespace

NoiseCovariance klmc_noise_cov(double eta, double gamma) {
  if (eta <= 0.0 || gamma <= 0.0)
    throw std::domain_error("klmc_noise_cov: eta and gamma must be positive");
  NoiseCovariance cov;
  cov.dim = 2;
  cov.entries = Eigen::MatrixXd(2, 2);
  const double em = std::expm1(-eta);
  cov.entries(0, 0) = gamma * (-std::expm1(-2.0 * eta));
  cov.entries(0, 1) = cov.entries(1, 0) = em * em;
  cov.entries(1, 1) = 2.0 * eta * eta * eta * sigma_tilde2(eta) / gamma;
  cov.chol = chol2(cov.entries);
  return cov;
}

NoiseCovariance rklmc_noise_cov(double eta, double gamma, double u) {
  if (eta <= 0.0 || gamma <= 0.0)
    throw std::domain_error("rklmc_noise_cov: eta and gamma must be positive");
  if (!(u > 0.0 && u <= 1.0))
    throw std::domain_error("rklmc_noise_cov: u must lie in (0, 1]");
  const double x = u * eta;             // exponent of the midpoint window
  const double c = std::exp(-(1.0 - u) * eta);
  const double emx = std::expm1(-x);
  const double emeta = std::expm1(-eta);

  NoiseCovariance cov;
  cov.dim = 3;
  cov.u = u;
  Eigen::MatrixXd v(3, 3);
  v(0, 0) = 2.0 * x * x * x * sigma_tilde2(x) / gamma;
  v(1, 1) = 2.0 * eta * eta * eta * sigma_tilde2(eta) / gamma;
  v(2, 2) = gamma * (-std::expm1(-2.0 * eta));
  {
    // Overlap of the midpoint and full-step position integrals:
    // 2 int_0^{uh} (1-e^{-g t})(1-e^{-g(t+(1-u)h)}) dt
    //   = [2 (x + expm1(-x)) - c expm1(-x)^2] / gamma,
    // with x + expm1(-x) = x^2 beta(x) evaluated by series for small x.
    double g2 = x + emx;
    if (x <= 1e-3) {
      double term = 0.5, sum = term;
      for (int k = 1; k <= 10; ++k) {
        term *= -x / (k + 2);
        sum += term;
      }
      g2 = x * x * sum;
    }
    v(0, 1) = v(1, 0) = (2.0 * g2 - c * emx * emx) / gamma;
  }
  v(0, 2) = v(2, 0) = c * emx * emx;
  v(1, 2) = v(2, 1) = emeta * emeta;

  cov.entries = v;
  Eigen::LLT<Eigen::MatrixXd> llt(v);
  if (llt.info() == Eigen::Success) {
    cov.chol = llt.matrixL();
  } else {
    Eigen::MatrixXd vj = v + 1e-14 * v.trace() * Eigen::MatrixXd::Identity(3, 3);
    Eigen::LLT<Eigen::MatrixXd> llt2(vj);
    if (llt2.info() != Eigen::Success)
      throw std::runtime_error("rklmc_noise_cov: covariance not PSD even after jitter");
    cov.chol = llt2.matrixL();
    cov.jittered = true;
  }
  return cov;
}

std::vector<Eigen::VectorXd> sample_noise(const NoiseCovariance& cov, int p, Philox& rng) {
  if (p < 1) throw std::invalid_argument("sample_noise: p must be >= 1");
  const int d = cov.dim;
  std::vector<Eigen::VectorXd> out(d, Eigen::VectorXd(p));
  Eigen::VectorXd z(d);
  for (int i = 0; i < p; ++i) {
    for (int k = 0; k < d; ++k) z(k) = rng.normal();
    for (int r = 0; r < d; ++r) {
      double s = 0.0;
      for (int k = 0; k <= r; ++k) s += cov.chol(r, k) * z(k);
      out[r](i) = s;
    }
  }
  return out;
}

}  // namespace langevin
