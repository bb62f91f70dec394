#pragma once

// Closed-form W2 error-bound evaluators for the four kernels, the matching
// step-size/iteration planners, and the iteration-count table generator.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace langevin {

struct BoundInputs {
  double m = 1.0;       // strong convexity
  double M = 1.0;       // smoothness
  int p = 1;            // dimension
  std::optional<double> gamma;  // kinetic kernels only
  double h = 0.0;
  double n = 0.0;       // iteration count (double: huge counts appear in plans)
  double w2_init = 0.0; // W2(nu0, pi)
  double ef0 = 0.0;     // E[f(theta0) - f(theta*)]

  double kappa() const { return M / m; }
};

struct BoundTerm {
  std::string name;
  double value = 0.0;
};

// valid=false never blocks evaluation; violated lists the failed preconditions.
struct BoundReport {
  double total = 0.0;
  std::vector<BoundTerm> terms;
  bool valid = true;
  std::vector<std::string> violated;
};

BoundReport lmc_bound(const BoundInputs& in);
BoundReport rlmc_bound(const BoundInputs& in);
BoundReport klmc_bound(const BoundInputs& in);
BoundReport rklmc_bound(const BoundInputs& in);

enum class Algorithm { LMC, RLMC, KLMC, RKLMC };

const char* algorithm_name(Algorithm a);
bool algorithm_kinetic(Algorithm a);

// Planner output. `step` is M*h for the overdamped kernels and gamma*h for
// the kinetic ones; kinetic plans also fix gamma = gamma_over_M * M.
struct Plan {
  Algorithm algorithm = Algorithm::LMC;
  double target_eps = 0.0;
  double kappa = 1.0;
  double step = 0.0;
  std::optional<double> gamma_over_M;
  double n_exact = 0.0;  // value of the corollary's lower bound
  double n = 0.0;        // its ceiling (>= 1)

  double h(double M) const { return algorithm_kinetic(algorithm) ? step / (gamma_over_M.value() * M) : step / M; }
  std::optional<double> gamma(double M) const {
    if (!gamma_over_M) return std::nullopt;
    return *gamma_over_M * M;
  }
};

Plan plan_lmc(double eps, double kappa);
Plan plan_rlmc(double eps, double kappa);
Plan plan_klmc(double eps, double kappa);
Plan plan_rklmc(double eps, double kappa);
Plan plan_for(Algorithm a, double eps, double kappa);

// Evaluates the matching bound at the plan's (h, n) for targets with the
// given (m, p), using w2_init = sqrt(p/m), ef0 = 0.
BoundReport bound_for_plan(const Plan& plan, double m, int p);

// Two-significant-figure scientific notation, rounding half away from zero,
// e.g. 8.351e6 -> "8.4e+06".
std::string format_2sf(double x);

struct Table1Cell {
  Algorithm algorithm;
  double eps;
  double kappa;
  double n_exact;      // ceiling of the corollary bound
  std::string n_2sf;
};

// Iteration counts for eps in {1e-1, 1e-3, 1e-5} x kappa in {1e1, ..., 1e11},
// all four planners.
std::vector<Table1Cell> table1();
std::vector<Table1Cell> table1(const std::vector<double>& eps_list,
                               const std::vector<double>& kappa_list);

std::string table1_csv(const std::vector<Table1Cell>& cells);
std::string table1_text(const std::vector<Table1Cell>& cells);

}  // namespace langevin
