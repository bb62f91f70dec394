#include "langevin/theory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace langevin {

namespace {

void check(BoundReport& rep, bool ok, const char* name) {
  if (!ok) {
    rep.valid = false;
    rep.violated.emplace_back(name);
  }
}

double finish(BoundReport& rep) {
  rep.total = 0.0;
  for (const auto& t : rep.terms) rep.total += t.value;
  return rep.total;
}

}  // namespace

BoundReport lmc_bound(const BoundInputs& in) {
  BoundReport rep;
  const double mh = in.m * in.h;
  const double contraction = std::exp(in.n * std::log1p(-mh));
  rep.terms.push_back({"initial", contraction * in.w2_init});
  rep.terms.push_back({"discretization", std::sqrt(2.0 * in.M * in.h * in.p / in.m)});
  check(rep, in.M * in.h <= 1.0, "Mh <= 1");
  finish(rep);
  return rep;
}

BoundReport rlmc_bound(const BoundInputs& in) {
  BoundReport rep;
  const double Mh = in.M * in.h;
  const double kappa = in.kappa();
  rep.terms.push_back({"initial", 1.11 * std::exp(-0.5 * in.m * in.n * in.h) * in.w2_init});
  rep.terms.push_back({"discretization",
                       (2.4 * std::sqrt(kappa * Mh) + 1.77) * Mh * std::sqrt(in.p / in.m)});
  check(rep, Mh + std::sqrt(kappa) * std::pow(Mh, 1.5) <= 0.25,
        "Mh + sqrt(kappa) (Mh)^{3/2} <= 1/4");
  finish(rep);
  return rep;
}

BoundReport klmc_bound(const BoundInputs& in) {
  BoundReport rep;
  const double gamma = in.gamma.value_or(0.0);
  const double gh = gamma * in.h;
  const double kappa = in.kappa();
  const double rho_n = std::exp(-in.m * in.n * in.h);
  rep.terms.push_back({"initial", 2.0 * rho_n * in.w2_init});
  rep.terms.push_back({"potential_gap", 0.05 * std::sqrt(rho_n * in.ef0 / in.m)});
  rep.terms.push_back({"discretization", 0.9 * gh * std::sqrt(kappa * in.p / in.m)});
  check(rep, gamma >= 5.0 * in.M, "gamma >= 5M");
  check(rep, std::sqrt(kappa) * gh <= 0.1, "sqrt(kappa) gamma h <= 0.1");
  finish(rep);
  return rep;
}

BoundReport rklmc_bound(const BoundInputs& in) {
  BoundReport rep;
  const double gamma = in.gamma.value_or(0.0);
  const double gh = gamma * in.h;
  const double kappa = in.kappa();
  const double rho_n = std::exp(-in.m * in.n * in.h);
  rep.terms.push_back({"initial", 1.6 * rho_n * in.w2_init});
  rep.terms.push_back({"potential_gap", 0.1 * std::sqrt(rho_n * in.ef0 / in.m)});
  rep.terms.push_back({"discretization_cubic",
                       0.2 * gh * gh * gh * std::sqrt(kappa * in.p / in.m)});
  rep.terms.push_back({"discretization_3_2",
                       10.0 * std::pow(gh, 1.5) * std::sqrt(in.p / in.m)});
  check(rep, gamma >= 5.0 * in.M, "gamma >= 5M");
  check(rep, gh <= 0.1 * std::pow(kappa, -1.0 / 6.0), "gamma h <= 0.1 kappa^{-1/6}");
  finish(rep);
  return rep;
}

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::LMC: return "lmc";
    case Algorithm::RLMC: return "rlmc";
    case Algorithm::KLMC: return "klmc";
    case Algorithm::RKLMC: return "rklmc";
  }
  return "?";
}

bool algorithm_kinetic(Algorithm a) {
  return a == Algorithm::KLMC || a == Algorithm::RKLMC;
}

namespace {

Plan make_plan(Algorithm alg, double eps, double kappa, double step,
               std::optional<double> gamma_over_M, double n_exact) {
  Plan p;
  p.algorithm = alg;
  p.target_eps = eps;
  p.kappa = kappa;
  p.step = step;
  p.gamma_over_M = gamma_over_M;
  p.n_exact = n_exact;
  p.n = std::max(1.0, std::ceil(n_exact));
  return p;
}

double log_term(double eps) { return std::log(20.0 / eps); }

}  // namespace

Plan plan_lmc(double eps, double kappa) {
  const double Mh = 0.5 * (19.0 / 20.0) * (19.0 / 20.0) * eps * eps;
  const double n = 2.22 * (kappa / (eps * eps)) * log_term(eps);
  return make_plan(Algorithm::LMC, eps, kappa, Mh, std::nullopt, n);
}

Plan plan_rlmc(double eps, double kappa) {
  const double Mh = eps / (1.5 + std::cbrt(6.5 * kappa * eps));
  const double n = (3.0 * kappa / eps +
                    3.8 * std::pow(kappa, 4.0 / 3.0) / std::pow(eps, 2.0 / 3.0)) *
                   log_term(eps);
  return make_plan(Algorithm::RLMC, eps, kappa, Mh, std::nullopt, n);
}

Plan plan_klmc(double eps, double kappa) {
  const double gh = eps / std::sqrt(kappa);
  const double n = 5.0 * std::pow(kappa, 1.5) / eps * log_term(eps);
  return make_plan(Algorithm::KLMC, eps, kappa, gh, 5.0, n);
}

Plan plan_rklmc(double eps, double kappa) {
  const double s = std::pow(eps * eps * kappa, 1.0 / 6.0);
  const double gh = std::pow(eps, 2.0 / 3.0) / (5.0 + 0.6 * s);
  const double n = kappa * std::pow(eps, -2.0 / 3.0) * (25.0 + 3.0 * s) * log_term(eps);
  return make_plan(Algorithm::RKLMC, eps, kappa, gh, 5.0, n);
}

Plan plan_for(Algorithm a, double eps, double kappa) {
  switch (a) {
    case Algorithm::LMC: return plan_lmc(eps, kappa);
    case Algorithm::RLMC: return plan_rlmc(eps, kappa);
    case Algorithm::KLMC: return plan_klmc(eps, kappa);
    case Algorithm::RKLMC: return plan_rklmc(eps, kappa);
  }
  throw std::logic_error("plan_for: unknown algorithm");
}

BoundReport bound_for_plan(const Plan& plan, double m, int p) {
  const double M = plan.kappa * m;
  BoundInputs in;
  in.m = m;
  in.M = M;
  in.p = p;
  in.h = plan.h(M);
  in.gamma = plan.gamma(M);
  in.n = plan.n;
  in.w2_init = std::sqrt(p / m);
  in.ef0 = 0.0;
  switch (plan.algorithm) {
    case Algorithm::LMC: return lmc_bound(in);
    case Algorithm::RLMC: return rlmc_bound(in);
    case Algorithm::KLMC: return klmc_bound(in);
    case Algorithm::RKLMC: return rklmc_bound(in);
  }
  throw std::logic_error("bound_for_plan: unknown algorithm");
}

std::string format_2sf(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) return "0.0e+00";
  int e = static_cast<int>(std::floor(std::log10(x)));
  double mant = x / std::pow(10.0, e);
  while (mant >= 10.0) { mant /= 10.0; ++e; }
  while (mant < 1.0) { mant *= 10.0; --e; }
  // round half away from zero at one decimal place of the mantissa
  long tenths = std::llround(mant * 10.0);
  if (tenths >= 100) { tenths = 10; ++e; }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%ld.%lde%+03d", tenths / 10, tenths % 10, e);
  return buf;
}

std::vector<Table1Cell> table1() {
  return table1({1e-1, 1e-3, 1e-5}, {1e1, 1e3, 1e5, 1e7, 1e9, 1e11});
}

std::vector<Table1Cell> table1(const std::vector<double>& eps_list,
                               const std::vector<double>& kappa_list) {
  std::vector<Table1Cell> cells;
  for (Algorithm a : {Algorithm::LMC, Algorithm::KLMC, Algorithm::RLMC, Algorithm::RKLMC}) {
    for (double eps : eps_list) {
      for (double kappa : kappa_list) {
        const Plan p = plan_for(a, eps, kappa);
        cells.push_back({a, eps, kappa, p.n, format_2sf(p.n)});
      }
    }
  }
  return cells;
}

std::string table1_csv(const std::vector<Table1Cell>& cells) {
  std::ostringstream os;
  os << "algorithm,eps,kappa,n_exact,n_2sf\n";
  char buf[64];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%s\n", algorithm_name(c.algorithm),
                  c.eps, c.kappa, c.n_exact, c.n_2sf.c_str());
    os << buf;
  }
  return os.str();
}

std::string table1_text(const std::vector<Table1Cell>& cells) {
  // Rows: algorithm x eps; columns: kappa.
  std::vector<double> kappas;
  for (const auto& c : cells)
    if (std::find(kappas.begin(), kappas.end(), c.kappa) == kappas.end())
      kappas.push_back(c.kappa);
  std::ostringstream os;
  os << "algorithm  eps     ";
  char buf[64];
  for (double k : kappas) {
    std::snprintf(buf, sizeof(buf), " kappa=%-8.0e", k);
    os << buf;
  }
  os << "\n";
  std::map<std::pair<int, double>, std::vector<std::string>> rows;
  std::vector<std::pair<int, double>> order;
  for (const auto& c : cells) {
    auto key = std::make_pair(static_cast<int>(c.algorithm), c.eps);
    if (rows.find(key) == rows.end()) order.push_back(key);
    rows[key].push_back(c.n_2sf);
  }
  for (const auto& key : order) {
    std::snprintf(buf, sizeof(buf), "%-10s %-7.0e", algorithm_name(static_cast<Algorithm>(key.first)),
                  key.second);
    os << buf;
    for (const auto& s : rows[key]) {
      std::snprintf(buf, sizeof(buf), " %-14s", s.c_str());
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace langevin
