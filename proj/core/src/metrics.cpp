#include "langevin/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "langevin/coeffs.hpp"

namespace langevin {

namespace {

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& S, const char* who) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  Eigen::VectorXd ev = es.eigenvalues();
  const double tol = -1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < tol) throw std::invalid_argument(std::string(who) + ": matrix is not PSD");
    ev(i) = std::sqrt(std::max(0.0, ev(i)));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double w2_gaussian(const GaussianLaw& a, const GaussianLaw& b) {
  if (a.mean.size() != b.mean.size())
    throw std::invalid_argument("w2_gaussian: dimension mismatch");
  const Eigen::MatrixXd rb = psd_sqrt(b.cov, "w2_gaussian");
  const Eigen::MatrixXd inner = psd_sqrt(rb * a.cov * rb, "w2_gaussian");
  const double bures =
      a.cov.trace() + b.cov.trace() - 2.0 * inner.trace();
  const double d2 = (a.mean - b.mean).squaredNorm() + std::max(0.0, bures);
  return std::sqrt(d2);
}

double normal_quantile(double p) {
  // Wichura, Algorithm AS 241 (PPND16).
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p outside (0,1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -val : val;
}

std::string W2Trace::csv() const {
  std::ostringstream os;
  os << "n,w2_exact,bound_total,valid\n";
  char buf[128];
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double b = bound_total.empty() ? std::nan("") : bound_total[i];
    std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g,%d\n",
                  static_cast<long long>(n[i]), w2_exact[i], b, valid ? 1 : 0);
    os << buf;
  }
  return os.str();
}

GaussianLaw lmc_gaussian_step(const Eigen::MatrixXd& A, const Eigen::VectorXd& theta_star,
                              double h, const GaussianLaw& law) {
  const int p = static_cast<int>(theta_star.size());
  const Eigen::MatrixXd T = Eigen::MatrixXd::Identity(p, p) - h * A;
  GaussianLaw out;
  out.mean = theta_star + T * (law.mean - theta_star);
  out.cov = T * law.cov * T.transpose() + 2.0 * h * Eigen::MatrixXd::Identity(p, p);
  return out;
}

namespace {

W2Trace run_trace(std::int64_t n, std::int64_t every, const BoundAt& bound, bool bound_valid,
                  const std::function<double()>& current_w2,
                  const std::function<void()>& advance) {
  W2Trace trace;
  trace.valid = bound_valid;
  auto record = [&](std::int64_t k) {
    trace.n.push_back(k);
    trace.w2_exact.push_back(current_w2());
    if (bound) trace.bound_total.push_back(bound(k));
  };
  if (every <= 0) every = 1;
  record(0);
  for (std::int64_t k = 1; k <= n; ++k) {
    advance();
    if (k % every == 0 || k == n) record(k);
  }
  return trace;
}

}  // namespace

W2Trace lmc_gaussian_recursion(const Eigen::MatrixXd& A, const Eigen::VectorXd& theta_star,
                               double h, const GaussianLaw& init, std::int64_t n,
                               std::int64_t record_every, const BoundAt& bound,
                               bool bound_valid) {
  GaussianLaw target;
  target.mean = theta_star;
  target.cov = A.inverse();
  GaussianLaw law = init;
  return run_trace(
      n, record_every, bound, bound_valid,
      [&]() { return w2_gaussian(law, target); },
      [&]() { law = lmc_gaussian_step(A, theta_star, h, law); });
}

JointGaussianLaw klmc_default_joint_init(const Eigen::VectorXd& theta_star, double gamma) {
  const int p = static_cast<int>(theta_star.size());
  JointGaussianLaw law;
  law.p = p;
  law.mean = Eigen::VectorXd::Zero(2 * p);
  law.mean.head(p) = theta_star;
  law.cov = Eigen::MatrixXd::Zero(2 * p, 2 * p);
  law.cov.bottomRightCorner(p, p) = gamma * Eigen::MatrixXd::Identity(p, p);
  return law;
}

JointGaussianLaw klmc_gaussian_step(const Eigen::MatrixXd& A,
                                    const Eigen::VectorXd& theta_star, double gamma,
                                    double h, const JointGaussianLaw& law) {
  const int p = law.p;
  const double eta = gamma * h;
  const StepCoefficients c = klmc_coeffs(eta);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(p, p);

  // State ordering (theta; v); gradient at theta is A (theta - theta*).
  Eigen::MatrixXd T(2 * p, 2 * p);
  T.topLeftCorner(p, p) = I - (c.beta * eta * eta / gamma) * A;
  T.topRightCorner(p, p) = (c.alpha * eta / gamma) * I;
  T.bottomLeftCorner(p, p) = -c.alpha * eta * A;
  T.bottomRightCorner(p, p) = (1.0 - c.alpha * eta) * I;

  const NoiseCovariance nc = klmc_noise_cov(eta, gamma);  // (v, theta) ordering
  Eigen::MatrixXd Q(2 * p, 2 * p);
  Q.topLeftCorner(p, p) = nc.entries(1, 1) * I;
  Q.topRightCorner(p, p) = nc.entries(0, 1) * I;
  Q.bottomLeftCorner(p, p) = nc.entries(0, 1) * I;
  Q.bottomRightCorner(p, p) = nc.entries(0, 0) * I;

  Eigen::VectorXd fixed = Eigen::VectorXd::Zero(2 * p);
  fixed.head(p) = theta_star;

  JointGaussianLaw out;
  out.p = p;
  out.mean = fixed + T * (law.mean - fixed);
  out.cov = T * law.cov * T.transpose() + Q;
  return out;
}

GaussianLaw position_marginal(const JointGaussianLaw& law) {
  GaussianLaw g;
  g.mean = law.mean.head(law.p);
  g.cov = law.cov.topLeftCorner(law.p, law.p);
  return g;
}

GaussianLaw velocity_marginal(const JointGaussianLaw& law) {
  GaussianLaw g;
  g.mean = law.mean.tail(law.p);
  g.cov = law.cov.bottomRightCorner(law.p, law.p);
  return g;
}

W2Trace klmc_gaussian_recursion(const Eigen::MatrixXd& A, const Eigen::VectorXd& theta_star,
                                double gamma, double h, const JointGaussianLaw& init,
                                std::int64_t n, std::int64_t record_every,
                                const BoundAt& bound, bool bound_valid) {
  GaussianLaw target;
  target.mean = theta_star;
  target.cov = A.inverse();
  JointGaussianLaw law = init;
  return run_trace(
      n, record_every, bound, bound_valid,
      [&]() { return w2_gaussian(position_marginal(law), target); },
      [&]() { law = klmc_gaussian_step(A, theta_star, gamma, h, law); });
}

Eigen::Matrix2d klmc_block_recursion(double lambda, double gamma, double h,
                                     const Eigen::Matrix2d& cov0, std::int64_t n) {
  const double eta = gamma * h;
  const StepCoefficients c = klmc_coeffs(eta);
  Eigen::Matrix2d T;
  T << 1.0 - c.beta * eta * eta * lambda / gamma, c.alpha * eta / gamma,
      -c.alpha * eta * lambda, 1.0 - c.alpha * eta;
  const NoiseCovariance nc = klmc_noise_cov(eta, gamma);
  Eigen::Matrix2d Q;
  Q << nc.entries(1, 1), nc.entries(0, 1), nc.entries(0, 1), nc.entries(0, 0);
  Eigen::Matrix2d S = cov0;
  for (std::int64_t k = 0; k < n; ++k) S = T * S * T.transpose() + Q;
  return S;
}

double empirical_w2_product(const Eigen::MatrixXd& samples,
                            const std::vector<Quantile>& marginals) {
  const int R = static_cast<int>(samples.rows());
  const int p = static_cast<int>(samples.cols());
  if (static_cast<int>(marginals.size()) != p)
    throw std::invalid_argument("empirical_w2_product: one quantile function per column");
  if (R < 1) throw std::invalid_argument("empirical_w2_product: no samples");
  double total = 0.0;
  std::vector<double> col(R);
  for (int d = 0; d < p; ++d) {
    for (int i = 0; i < R; ++i) col[i] = samples(i, d);
    std::sort(col.begin(), col.end());
    double acc = 0.0;
    for (int i = 0; i < R; ++i) {
      const double q = marginals[d]((i + 0.5) / R);
      const double diff = col[i] - q;
      acc += diff * diff;
    }
    total += acc / R;
  }
  return std::sqrt(total);
}

std::vector<Quantile> gaussian_product_quantiles(const Eigen::VectorXd& mean,
                                                 const Eigen::VectorXd& variances) {
  std::vector<Quantile> qs;
  for (int d = 0; d < mean.size(); ++d) {
    const double mu = mean(d);
    const double sd = std::sqrt(variances(d));
    qs.push_back([mu, sd](double u) { return mu + sd * normal_quantile(u); });
  }
  return qs;
}

BootstrapEstimate empirical_w2_bootstrap(const Eigen::MatrixXd& samples,
                                         const std::vector<Quantile>& marginals,
                                         int bootstrap_rounds, std::uint64_t seed) {
  BootstrapEstimate est;
  est.value = empirical_w2_product(samples, marginals);
  const int R = static_cast<int>(samples.rows());
  const int p = static_cast<int>(samples.cols());
  double sum = 0.0, sum2 = 0.0;
  Eigen::MatrixXd resampled(R, p);
  for (int b = 0; b < bootstrap_rounds; ++b) {
    Philox rng = replica_rng(seed, static_cast<std::uint64_t>(b));
    for (int i = 0; i < R; ++i) {
      const int j = static_cast<int>(rng.uniform_co() * R);
      resampled.row(i) = samples.row(std::min(j, R - 1));
    }
    const double w = empirical_w2_product(resampled, marginals);
    sum += w;
    sum2 += w * w;
  }
  if (bootstrap_rounds > 1) {
    const double mean = sum / bootstrap_rounds;
    est.se = std::sqrt(std::max(0.0, (sum2 / bootstrap_rounds - mean * mean) *
                                         bootstrap_rounds / (bootstrap_rounds - 1.0)));
  }
  return est;
}

MomentDiagnostics moment_diagnostics(const Eigen::MatrixXd& samples,
                                     const PotentialSpec* pot) {
  const int R = static_cast<int>(samples.rows());
  if (R < 1) throw std::invalid_argument("moment_diagnostics: no samples");
  MomentDiagnostics d;
  d.mean = samples.colwise().mean();
  const Eigen::MatrixXd centered = samples.rowwise() - d.mean.transpose();
  d.cov = (R > 1) ? Eigen::MatrixXd((centered.transpose() * centered) / (R - 1.0))
                  : Eigen::MatrixXd::Zero(samples.cols(), samples.cols());
  if (pot) {
    double acc = 0.0;
    for (int i = 0; i < R; ++i) acc += pot->value(samples.row(i).transpose());
    d.ef = acc / R;
  }
  return d;
}

}  // namespace langevin
