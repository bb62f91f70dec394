#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "langevin/coeffs.hpp"
#include "langevin/quadrature.hpp"
#include "langevin/rng.hpp"

using namespace langevin;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    g[i] = std::exp(llo + (lhi - llo) * i / (n - 1));
  return g;
}

}  // namespace

TEST_CASE("psi basic values") {
  CHECK(psi(0.0) == 1.0);
  CHECK(psi(0.2) == doctest::Approx(0.90634623461009071).epsilon(1e-14));
  CHECK_THROWS_AS(psi(-1e-9), std::domain_error);
}

TEST_CASE("psi is continuous across the series switch") {
  // The switch sits near 1e-3; compare against the series evaluated where
  // the direct expression is still accurate.
  for (double x : {1e-4, 5e-4, 9.9e-4, 1.01e-3, 2e-3, 1e-2}) {
    const double direct = -std::expm1(-x) / x;
    CHECK(psi(x) == doctest::Approx(direct).epsilon(1e-14));
  }
  // At 1e-14 the direct expression is useless; the series limit is 1 - x/2.
  CHECK(psi(1e-14) == doctest::Approx(1.0 - 0.5e-14).epsilon(1e-15));
}

TEST_CASE("klmc_coeffs at eta = 0.2") {
  const StepCoefficients c = klmc_coeffs(0.2);
  CHECK(c.alpha == doctest::Approx(0.90634623461009071).epsilon(1e-13));
  CHECK(c.beta == doctest::Approx(0.46826882694954647).epsilon(1e-13));
  CHECK(c.sigma2 == doctest::Approx(0.82419988491090175).epsilon(1e-13));
  CHECK(c.sigma_tilde2 == doctest::Approx(0.28768539226800837).epsilon(1e-13));
  CHECK_THROWS_AS(klmc_coeffs(0.0), std::domain_error);
  CHECK_THROWS_AS(klmc_coeffs(-1.0), std::domain_error);
}

TEST_CASE("coefficient limits as eta -> 0") {
  const StepCoefficients c = klmc_coeffs(1e-12);
  CHECK(c.alpha == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(c.beta == doctest::Approx(0.5).epsilon(1e-11));
  CHECK(c.sigma2 == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(c.sigma_tilde2 == doctest::Approx(1.0 / 3.0).epsilon(1e-11));
}

TEST_CASE("coefficient ranges on a log grid") {
  for (double eta : log_grid(1e-10, 10.0, 60)) {
    const StepCoefficients c = klmc_coeffs(eta);
    CHECK(c.alpha > 0.0);
    CHECK(c.alpha < 1.0);
    CHECK(c.beta > 0.0);
    CHECK(c.beta < 0.5);
    CHECK(c.sigma2 > 0.0);
    CHECK(c.sigma2 < 1.0);
    CHECK(c.sigma_tilde2 > 0.0);
    CHECK(c.sigma_tilde2 < 1.0 / 3.0);
  }
}

TEST_CASE("algebraic identities 1 - alpha eta = e^{-eta}, eta alpha = 1 - e^{-eta}") {
  for (double eta : log_grid(1e-12, 10.0, 50)) {
    const StepCoefficients c = klmc_coeffs(eta);
    const double target = -std::expm1(-eta);  // 1 - e^{-eta} without cancellation
    CHECK(std::abs(c.alpha * eta - target) <= 1e-15 * target);
    // Equivalent statement of the first identity, stable at both ends.
    CHECK(std::abs((1.0 - c.alpha * eta) - std::exp(-eta)) <= 1e-15);
  }
}

TEST_CASE("alpha and sigma2 strictly decreasing") {
  double prev_a = 2.0, prev_s = 2.0;
  for (double eta : log_grid(1e-8, 10.0, 40)) {
    const StepCoefficients c = klmc_coeffs(eta);
    CHECK(c.alpha < prev_a);
    CHECK(c.sigma2 < prev_s);
    prev_a = c.alpha;
    prev_s = c.sigma2;
  }
}

TEST_CASE("klmc_noise_cov closed forms at gamma=5, eta=0.2") {
  const NoiseCovariance cov = klmc_noise_cov(0.2, 5.0);
  REQUIRE(cov.dim == 2);
  CHECK(cov.entries(0, 0) == doctest::Approx(1.6483997698218035).epsilon(1e-13));
  CHECK(cov.entries(0, 1) == doctest::Approx(0.032858539879675583).epsilon(1e-13));
  CHECK(cov.entries(1, 1) == doctest::Approx(0.00092059325525762679).epsilon(1e-13));
  // Cholesky reconstruction
  const Eigen::MatrixXd rec = cov.chol * cov.chol.transpose();
  CHECK((rec - cov.entries).norm() <= 1e-12 * cov.entries.norm());
  CHECK_FALSE(cov.jittered);
}

TEST_CASE("klmc_noise_cov vanishing-step scaling") {
  const double gamma = 3.0;
  const double eta = 1e-7;
  const double h = eta / gamma;
  const NoiseCovariance cov = klmc_noise_cov(eta, gamma);
  // Var_v ~ 2 gamma^2 h, Cov ~ eta^2
  CHECK(cov.entries(0, 0) == doctest::Approx(2.0 * gamma * gamma * h).epsilon(1e-6));
  CHECK(cov.entries(0, 1) == doctest::Approx(eta * eta).epsilon(1e-6));
}

TEST_CASE("position-noise variance equals 2 eta^3 sigma_tilde^2 / gamma") {
  for (double gamma : {2.0, 5.0, 20.0}) {
    for (double eta : {1e-6, 1e-3, 0.05, 0.2, 1.0}) {
      const NoiseCovariance cov = klmc_noise_cov(eta, gamma);
      const double expect = 2.0 * eta * eta * eta * sigma_tilde2(eta) / gamma;
      CHECK(cov.entries(1, 1) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("rklmc_noise_cov structure") {
  const double eta = 0.2, gamma = 5.0;

  SUBCASE("u=1 collapses the midpoint row onto the full-step row") {
    const NoiseCovariance cov = rklmc_noise_cov(eta, gamma, 1.0);
    CHECK(std::abs(cov.entries(0, 0) - cov.entries(1, 1)) <= 1e-14);
    CHECK(std::abs(cov.entries(0, 2) - cov.entries(1, 2)) <= 1e-14);
    CHECK(std::abs(cov.entries(0, 1) - cov.entries(1, 1)) <= 1e-14);
  }

  SUBCASE("entry (2,3) equals the 2x2 cross-covariance, independent of u") {
    const double expect = std::expm1(-eta) * std::expm1(-eta);
    for (double u : {0.1, 0.37, 0.5, 0.9, 1.0}) {
      const NoiseCovariance cov = rklmc_noise_cov(eta, gamma, u);
      CHECK(cov.entries(1, 2) == doctest::Approx(expect).epsilon(1e-13));
    }
  }

  SUBCASE("midpoint variance shrinks like u^3") {
    const double v1 = rklmc_noise_cov(eta, gamma, 1e-3).entries(0, 0);
    const double v2 = rklmc_noise_cov(eta, gamma, 2e-3).entries(0, 0);
    CHECK(v2 / v1 == doctest::Approx(8.0).epsilon(1e-2));
  }

  SUBCASE("u outside (0,1] throws") {
    CHECK_THROWS_AS(rklmc_noise_cov(eta, gamma, 0.0), std::domain_error);
    CHECK_THROWS_AS(rklmc_noise_cov(eta, gamma, 1.5), std::domain_error);
  }
}

TEST_CASE("sample_noise moments") {
  Philox rng(421, 0);

  SUBCASE("2x2 sample covariance within 3 standard errors") {
    const NoiseCovariance cov = klmc_noise_cov(0.2, 5.0);
    const int N = 100000;
    Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
    for (int i = 0; i < N; ++i) {
      const auto draws = sample_noise(cov, 1, rng);
      Eigen::Vector2d z(draws[0](0), draws[1](0));
      acc += z * z.transpose();
    }
    acc /= N;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double se = std::sqrt((cov.entries(i, i) * cov.entries(j, j) +
                                     cov.entries(i, j) * cov.entries(i, j)) /
                                    N);
        CHECK(std::abs(acc(i, j) - cov.entries(i, j)) <= 3.0 * se);
      }
  }

  SUBCASE("zero covariance gives zero draws") {
    NoiseCovariance cov;
    cov.dim = 2;
    cov.entries = Eigen::Matrix2d::Zero();
    cov.chol = Eigen::Matrix2d::Zero();
    const auto draws = sample_noise(cov, 3, rng);
    CHECK(draws[0].norm() == 0.0);
    CHECK(draws[1].norm() == 0.0);
  }
}

TEST_CASE("reference-grid accuracy vs quadrature at moderate eta") {
  // Independent check of the closed forms against direct Gauss-Legendre
  // integration of the defining stochastic-integral variances.
  const auto& gl = gauss_legendre_64();
  for (double gamma : {2.0, 20.0}) {
    for (double eta : {0.05, 0.5, 2.0}) {
      const double h = eta / gamma;
      const NoiseCovariance cov = klmc_noise_cov(eta, gamma);
      const double vv = gl.integrate(
          [&](double s) { const double e = std::exp(-gamma * (h - s)); return 2.0 * gamma * gamma * e * e; }, 0.0, h);
      const double vt = gl.integrate(
          [&](double s) { const double e = -std::expm1(-gamma * (h - s)); return 2.0 * e * e; }, 0.0, h);
      const double cv = gl.integrate(
          [&](double s) {
            return 2.0 * gamma * std::exp(-gamma * (h - s)) * (-std::expm1(-gamma * (h - s)));
          }, 0.0, h);
      const double scale = cov.entries.trace();
      CHECK(std::abs(cov.entries(0, 0) - vv) <= 1e-13 * scale);
      CHECK(std::abs(cov.entries(1, 1) - vt) <= 1e-13 * scale);
      CHECK(std::abs(cov.entries(0, 1) - cv) <= 1e-13 * scale);
    }
  }
}
