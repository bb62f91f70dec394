#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "langevin/metrics.hpp"
#include "langevin/potentials.hpp"
#include "langevin/samplers.hpp"
#include "langevin/theory.hpp"

using namespace langevin;

namespace {

GaussianLaw gauss1(double mean, double var) {
  GaussianLaw g;
  g.mean = Eigen::VectorXd::Constant(1, mean);
  g.cov = Eigen::MatrixXd::Constant(1, 1, var);
  return g;
}

GaussianLaw random_law(int p, Philox& rng) {
  GaussianLaw g;
  g.mean = Eigen::VectorXd(p);
  for (int i = 0; i < p; ++i) g.mean(i) = rng.normal();
  Eigen::MatrixXd B(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) B(i, j) = rng.normal();
  g.cov = B * B.transpose() + 0.1 * Eigen::MatrixXd::Identity(p, p);
  return g;
}

}  // namespace

TEST_CASE("w2_gaussian closed-form cases") {
  CHECK(w2_gaussian(gauss1(0, 1), gauss1(0, 1)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(w2_gaussian(gauss1(0, 1), gauss1(0, 4)) == doctest::Approx(1.0).epsilon(1e-13));

  GaussianLaw a, b;
  a.mean = Eigen::Vector2d::Zero();
  a.cov = Eigen::Matrix2d::Identity();
  b.mean = Eigen::Vector2d(3, 4);
  b.cov = Eigen::Matrix2d::Identity();
  CHECK(w2_gaussian(a, b) == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("w2_gaussian symmetry and triangle inequality") {
  Philox rng(44, 0);
  for (int rep = 0; rep < 30; ++rep) {
    const GaussianLaw a = random_law(3, rng);
    const GaussianLaw b = random_law(3, rng);
    const GaussianLaw c = random_law(3, rng);
    const double dab = w2_gaussian(a, b);
    const double dba = w2_gaussian(b, a);
    CHECK(std::abs(dab - dba) <= 1e-12 * std::max(1.0, dab));
    CHECK(dab <= w2_gaussian(a, c) + w2_gaussian(c, b) + 1e-9);
  }
}

TEST_CASE("w2_gaussian input validation") {
  GaussianLaw bad;
  bad.mean = Eigen::Vector2d::Zero();
  bad.cov = -Eigen::Matrix2d::Identity();
  CHECK_THROWS_AS(w2_gaussian(bad, bad), std::invalid_argument);

  GaussianLaw a = gauss1(0, 1);
  GaussianLaw b;
  b.mean = Eigen::Vector2d::Zero();
  b.cov = Eigen::Matrix2d::Identity();
  CHECK_THROWS_AS(w2_gaussian(a, b), std::invalid_argument);
}

TEST_CASE("normal_quantile reference points") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(normal_quantile(0.975) == doctest::Approx(1.9599639845400545).epsilon(1e-13));
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.9599639845400545).epsilon(1e-13));
  CHECK(normal_quantile(1e-10) == doctest::Approx(-6.3613409024040557).epsilon(1e-12));
}

TEST_CASE("lmc_gaussian_recursion") {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(1, 1);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  const double h = 0.1;

  SUBCASE("discrete stationary law is a fixed point") {
    GaussianLaw st = gauss1(0.0, 2.0 / (2.0 - h));
    const W2Trace tr = lmc_gaussian_recursion(A, zero, h, st, 50, 10);
    for (double w : tr.w2_exact)
      CHECK(w == doctest::Approx(tr.w2_exact.front()).epsilon(1e-10));
  }

  SUBCASE("delta init converges to the discretization floor") {
    GaussianLaw init = gauss1(0.0, 0.0);
    const W2Trace tr = lmc_gaussian_recursion(A, zero, h, init, 2000, 2000);
    CHECK(tr.w2_exact.back() ==
          doctest::Approx(0.025978352085154095).epsilon(1e-10));
  }

  SUBCASE("trace stays below the theorem curve") {
    GaussianLaw init = gauss1(0.0, 0.0);
    BoundInputs in;
    in.m = in.M = 1.0;
    in.p = 1;
    in.h = 0.02;
    in.w2_init = 1.0;  // W2(delta_0, N(0,1)) = 1
    const BoundAt bound = [&](std::int64_t n) {
      BoundInputs b = in;
      b.n = static_cast<double>(n);
      return lmc_bound(b).total;
    };
    const W2Trace tr = lmc_gaussian_recursion(A, zero, 0.02, init, 500, 25, bound);
    REQUIRE(tr.bound_total.size() == tr.w2_exact.size());
    for (std::size_t i = 0; i < tr.n.size(); ++i)
      CHECK(tr.w2_exact[i] <= tr.bound_total[i]);
  }
}

TEST_CASE("klmc_gaussian_recursion block consistency") {
  const Eigen::Vector2d diag(1.0, 4.0);
  const Eigen::MatrixXd A = diag.asDiagonal();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  const double gamma = 20.0, h = 0.01;
  JointGaussianLaw law = klmc_default_joint_init(zero, gamma);
  const int n = 200;
  for (int k = 0; k < n; ++k) law = klmc_gaussian_step(A, zero, gamma, h, law);

  for (int i = 0; i < 2; ++i) {
    Eigen::Matrix2d c0 = Eigen::Matrix2d::Zero();
    c0(1, 1) = gamma;  // (theta, v) ordering, delta position + N(0, gamma) velocity
    const Eigen::Matrix2d blk = klmc_block_recursion(diag(i), gamma, h, c0, n);
    CHECK(std::abs(law.cov(i, i) - blk(0, 0)) <= 1e-12 * blk.trace());
    CHECK(std::abs(law.cov(2 + i, 2 + i) - blk(1, 1)) <= 1e-12 * blk.trace());
    CHECK(std::abs(law.cov(i, 2 + i) - blk(0, 1)) <= 1e-12 * blk.trace());
  }
}

TEST_CASE("klmc recursion commutes with orthogonal change of basis") {
  const Eigen::Vector2d diag(1.0, 9.0);
  const Eigen::MatrixXd A = diag.asDiagonal();
  const double c = std::cos(0.7), s = std::sin(0.7);
  Eigen::Matrix2d Q;
  Q << c, -s, s, c;
  const Eigen::MatrixXd Arot = Q * A * Q.transpose();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  const double gamma = 45.0, h = 0.004;
  const W2Trace ta = klmc_gaussian_recursion(A, zero, gamma, h,
                                             klmc_default_joint_init(zero, gamma), 300, 50);
  const W2Trace tb = klmc_gaussian_recursion(Arot, zero, gamma, h,
                                             klmc_default_joint_init(zero, gamma), 300, 50);
  REQUIRE(ta.w2_exact.size() == tb.w2_exact.size());
  for (std::size_t i = 0; i < ta.w2_exact.size(); ++i)
    CHECK(std::abs(ta.w2_exact[i] - tb.w2_exact[i]) <= 1e-10);
}

TEST_CASE("lmc recursion commutes with orthogonal change of basis") {
  const Eigen::Vector2d diag(1.0, 9.0);
  const Eigen::MatrixXd A = diag.asDiagonal();
  const double c = std::cos(0.3), s = std::sin(0.3);
  Eigen::Matrix2d Q;
  Q << c, -s, s, c;
  const Eigen::MatrixXd Arot = Q * A * Q.transpose();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  GaussianLaw init;
  init.mean = Eigen::Vector2d(1, -1);
  init.cov = Eigen::Matrix2d::Identity();
  GaussianLaw init_rot;
  init_rot.mean = Q * init.mean;
  init_rot.cov = init.cov;
  const W2Trace ta = lmc_gaussian_recursion(A, zero, 0.02, init, 200, 40);
  const W2Trace tb = lmc_gaussian_recursion(Arot, zero, 0.02, init_rot, 200, 40);
  for (std::size_t i = 0; i < ta.w2_exact.size(); ++i)
    CHECK(std::abs(ta.w2_exact[i] - tb.w2_exact[i]) <= 1e-10);
}

TEST_CASE("long klmc chain matches the recursion's stationary moments") {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(1, 1);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(1);
  const double gamma = 5.0, h = 0.02;

  JointGaussianLaw law = klmc_default_joint_init(zero, gamma);
  for (int k = 0; k < 3000; ++k) law = klmc_gaussian_step(A, zero, gamma, h, law);
  const double var_th = law.cov(0, 0);
  const double var_v = law.cov(1, 1);

  const PotentialSpec pot = make_gaussian(A, zero);
  Philox rng(2718, 0);
  KernelConfig k{KernelKind::KLMC, h, gamma};
  ChainState s = default_init(k, pot, rng);
  const int burn = 2000, N = 1000000;
  for (int i = 0; i < burn; ++i) s = klmc_step(s, pot, gamma, h, rng);
  double acc_th = 0, acc_v = 0;
  for (int i = 0; i < N; ++i) {
    s = klmc_step(s, pot, gamma, h, rng);
    acc_th += s.theta(0) * s.theta(0);
    acc_v += (*s.v)(0) * (*s.v)(0);
  }
  acc_th /= N;
  acc_v /= N;
  // Autocorrelated chain: effective sample size ~ N m h / 2.
  const int n_eff = static_cast<int>(N * 1.0 * h / 2.0);
  CHECK(std::abs(acc_th - var_th) <= 3.0 * var_th * std::sqrt(2.0 / n_eff));
  CHECK(std::abs(acc_v - var_v) <= 3.0 * var_v * std::sqrt(2.0 / n_eff));
}

TEST_CASE("empirical_w2_product") {
  SUBCASE("two-point constant shift") {
    Eigen::MatrixXd samples(2, 1);
    samples << 0, 0;
    const std::vector<Quantile> target = {[](double) { return 1.0; }};
    CHECK(empirical_w2_product(samples, target) == doctest::Approx(1.0));
  }

  SUBCASE("standard normal self-distance is small and decreasing in R") {
    double prev = HUGE_VAL;
    for (int R : {1000, 10000, 100000}) {
      Philox rng(515, static_cast<std::uint64_t>(R));
      Eigen::MatrixXd samples(R, 1);
      for (int i = 0; i < R; ++i) samples(i, 0) = rng.normal();
      const auto target = gaussian_product_quantiles(
          Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1));
      const double w = empirical_w2_product(samples, target);
      CHECK(w < prev);
      prev = w;
    }
    CHECK(prev <= 0.02);
  }

  SUBCASE("bootstrap covers the self-distance bias") {
    const int R = 100000;
    Philox rng(3111, 0);
    Eigen::MatrixXd samples(R, 1);
    for (int i = 0; i < R; ++i) samples(i, 0) = rng.normal();
    const auto target = gaussian_product_quantiles(
        Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1));
    const BootstrapEstimate est = empirical_w2_bootstrap(samples, target, 100, 9);
    CHECK(est.value <= 3.0 * (est.value + est.se));  // finite, consistent
    CHECK(est.se > 0.0);
    CHECK(est.value <= 0.02);
  }
}

TEST_CASE("moment_diagnostics") {
  SUBCASE("constant samples have zero covariance") {
    Eigen::MatrixXd samples = Eigen::MatrixXd::Constant(50, 2, 3.0);
    const MomentDiagnostics d = moment_diagnostics(samples);
    CHECK(d.cov.norm() == doctest::Approx(0.0));
    CHECK(d.mean(0) == doctest::Approx(3.0));
  }

  SUBCASE("standard normal sample mean within CLT tolerance") {
    const int R = 100000;
    Philox rng(88, 0);
    Eigen::MatrixXd samples(R, 2);
    for (int i = 0; i < R; ++i)
      for (int j = 0; j < 2; ++j) samples(i, j) = rng.normal();
    const PotentialSpec pot =
        make_gaussian(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero());
    const MomentDiagnostics d = moment_diagnostics(samples, &pot);
    for (int j = 0; j < 2; ++j)
      CHECK(std::abs(d.mean(j)) <= 3.0 / std::sqrt(static_cast<double>(R)));
    // E f = p/2 under the standard Gaussian target.
    REQUIRE(d.ef.has_value());
    CHECK(*d.ef == doctest::Approx(1.0).epsilon(0.02));
  }
}
