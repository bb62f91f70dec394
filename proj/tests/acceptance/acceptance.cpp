// Acceptance gate: eight numbered criteria, one pass/fail line each.
// Usage: acceptance <1..8>   (run one criterion; exit 0 pass, 1 fail)
//        acceptance          (run all)

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "langevin/harness.hpp"
#include "langevin/metrics.hpp"
#include "langevin/potentials.hpp"
#include "langevin/samplers.hpp"
#include "langevin/theory.hpp"

using namespace langevin;

namespace {

int g_threads = 4;

bool report(int k, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", k, detail.c_str());
  return pass;
}

bool suite_criterion(int k, const char* suite, const char* what) {
  const SuiteReport rep = run_suite(suite, 12345, g_threads);
  std::string detail = std::string(what) + " (" + std::to_string(rep.checks.size()) +
                       " checks, " + std::to_string(rep.seconds) + "s)";
  if (!rep.passed()) {
    detail += "; failing:";
    for (const auto& c : rep.checks)
      if (!c.pass) detail += " [" + c.name + ": " + c.detail + "]";
  }
  return report(k, rep.passed(), detail);
}

// 1. Iteration-count table vs the published fixture.
bool criterion1() {
  const Table1Report rep = compare_table1();
  const bool ratios_ok = rep.rklmc_ratio_min >= 1.0 && rep.rklmc_ratio_max <= 2.2;
  const bool pass = rep.mismatches_deterministic == 0 && ratios_ok;
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "iteration table: %d mismatched deterministic cells (LMC+KLMC+RLMC, "
                "54 total), randomized-kinetic ratios in [%.3f, %.3f] (required "
                "[1, 2.2])",
                rep.mismatches_deterministic, rep.rklmc_ratio_min, rep.rklmc_ratio_max);
  std::string detail = buf;
  if (rep.mismatches_deterministic > 0) {
    detail += "; mismatches:";
    for (const auto& row : rep.rows)
      if (!row.match && row.algorithm != Algorithm::RKLMC) {
        std::snprintf(buf, sizeof(buf), " [%s eps=%g kappa=%g computed %s printed %s]",
                      algorithm_name(row.algorithm), row.eps, row.kappa,
                      row.computed_2sf.c_str(), row.printed_2sf.c_str());
        detail += buf;
      }
  }
  return report(1, pass, detail);
}

bool criterion2() {
  return suite_criterion(2, "bound-domination",
                         "exact W2 trace below the theorem curve on the Gaussian grid");
}

bool criterion3() {
  return suite_criterion(3, "noise-covariance",
                         "closed-form noise covariances vs quadrature and Monte Carlo");
}

bool criterion4() {
  return suite_criterion(4, "one-step-error",
                         "one-step discretization errors below the lemma bounds");
}

bool criterion5() {
  return suite_criterion(5, "contraction",
                         "coupled-path contraction at the predicted rate");
}

// 6. Empirical end-to-end for the two randomized kernels.
bool criterion6() {
  const double eps = 0.3;
  const int p = 2, replicas = 100000;
  const Eigen::Vector2d diag(1.0, 10.0);
  const Eigen::MatrixXd A = diag.asDiagonal();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(p);
  const PotentialSpec pot = make_gaussian(A, zero);
  const auto target =
      gaussian_product_quantiles(zero, diag.cwiseInverse());

  bool pass = true;
  std::string detail = "empirical product-W2 at eps=0.3, kappa=10, 1e5 replicas:";
  for (Algorithm a : {Algorithm::RLMC, Algorithm::RKLMC}) {
    const Plan plan = plan_for(a, eps, pot.kappa());
    KernelConfig k;
    k.kind = a == Algorithm::RLMC ? KernelKind::RLMC : KernelKind::RKLMC;
    k.h = plan.h(pot.M);
    k.gamma = plan.gamma(pot.M);
    const Eigen::MatrixXd rows = run_replicas(
        k, pot, static_cast<std::int64_t>(plan.n), replicas, 777, g_threads);
    const BootstrapEstimate est = empirical_w2_bootstrap(rows, target, 100, 778);
    const double limit = eps * std::sqrt(static_cast<double>(p) / pot.m) + 3.0 * est.se;
    const bool ok = est.value <= limit;
    pass = pass && ok;
    char buf[160];
    std::snprintf(buf, sizeof(buf), " %s W2=%.4f (limit %.4f, n=%lld)%s",
                  algorithm_name(a), est.value, limit,
                  static_cast<long long>(plan.n), ok ? "" : " EXCEEDED");
    detail += buf;
  }
  return report(6, pass, detail);
}

bool criterion7() {
  return suite_criterion(7, "coeffs-stability",
                         "coefficient accuracy vs the extended-precision reference");
}

// 8. Byte-identical run output across thread counts.
bool criterion8() {
  nlohmann::json j{{"potential", {{"kind", "gaussian"}, {"diag", {1.0, 10.0}}}},
                   {"algorithm", "rklmc"},
                   {"plan", {{"h", 0.004}, {"gamma", 50.0}, {"n", 300}}},
                   {"replicas", 2000},
                   {"seed", 99}};
  const ExperimentConfig cfg = parse_config(j);
  const RunReport a = execute_run(cfg, 1);
  const RunReport b = execute_run(cfg, 4);
  const RunReport c = execute_run(cfg, 1);  // repeat: same seed, same bytes
  const bool pass = a.csv == b.csv && a.csv == c.csv && !a.csv.empty();
  return report(8, pass,
                pass ? "identical CSV bytes for thread counts {1,4} and repeated runs"
                     : "CSV output differs between runs");
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("LANGEVIN_THREADS")) g_threads = std::atoi(env);
  bool (*criteria[8])() = {criterion1, criterion2, criterion3, criterion4,
                           criterion5, criterion6, criterion7, criterion8};
  if (argc > 1) {
    const int k = std::atoi(argv[1]);
    if (k < 1 || k > 8) {
      std::fprintf(stderr, "usage: %s [1..8]\n", argv[0]);
      return 1;
    }
    return criteria[k - 1]() ? 0 : 1;
  }
  bool all = true;
  for (int k = 0; k < 8; ++k) all = criteria[k]() && all;
  return all ? 0 : 1;
}
