#pragma once

// Experiment configuration, run/table/validate commands, and the validation
// suites shared between the CLI and the acceptance tests.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "langevin/metrics.hpp"
#include "langevin/potentials.hpp"
#include "langevin/theory.hpp"

namespace langevin {

struct ExperimentConfig {
  PotentialSpec potential;
  bool product_target = false;          // diagonal-precision Gaussian
  Eigen::VectorXd target_variances;     // per-coordinate, if product_target
  bool gaussian_target = false;
  Eigen::MatrixXd precision;            // if gaussian_target

  Algorithm algorithm = Algorithm::LMC;

  // Exactly one of eps (corollary plan) or the explicit (h [, gamma], n).
  std::optional<double> eps;
  std::optional<double> h;
  std::optional<double> gamma;
  std::optional<std::int64_t> n;

  int replicas = 1;
  std::uint64_t seed = 0;
  std::int64_t record_every = 0;  // 0: final only (oracle traces always record)
  std::string csv_path;           // empty: stdout
  std::string json_path;          // empty: no JSON report

  nlohmann::json echo;  // the parsed config, round-tripped into the report
};

// Throws std::runtime_error with a message naming the offending field.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const nlohmann::json& j);

struct ResolvedPlan {
  double h = 0.0;
  std::optional<double> gamma;
  std::int64_t n = 0;
  std::optional<Plan> corollary;  // set when planned from eps
};

ResolvedPlan resolve_plan(const ExperimentConfig& cfg);

struct RunReport {
  nlohmann::json json;   // full report
  std::string csv;       // trace CSV (n,w2_exact,w2_empirical,bound_total,valid)
  bool bound_valid = true;
};

RunReport execute_run(const ExperimentConfig& cfg, int threads);

// CLI entry points. Return process exit codes (0 ok, 1 usage/config error,
// 2 validation failure).
int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed_override,
            int threads);
int cmd_table1(const std::string& csv_path);
int cmd_validate(const std::string& suite, const std::string& json_path,
                 std::uint64_t seed, int threads);

// --- iteration-count table vs the published fixture ---

struct Table1Row {
  Algorithm algorithm;
  double eps, kappa;
  double n_exact;
  std::string computed_2sf;
  std::string printed_2sf;
  bool match;
  double ratio;  // printed / computed
};

struct Table1Report {
  std::vector<Table1Row> rows;
  int mismatches_deterministic = 0;  // LMC + KLMC + RLMC cells
  double rklmc_ratio_min = 0.0, rklmc_ratio_max = 0.0;
  std::string text;  // fixed-width table with mismatch marks
};

const std::vector<double>& table1_printed_fixture();  // 72 cells, row-major
Table1Report compare_table1();

// --- validation suites ---

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  double seconds = 0.0;
  bool passed() const;
  nlohmann::json to_json() const;
  std::string summary() const;  // one line per check
};

const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& name, std::uint64_t seed, int threads);

SuiteReport suite_coeffs_stability();
SuiteReport suite_noise_covariance(std::uint64_t seed);
SuiteReport suite_one_step_error(std::uint64_t seed, int threads);
SuiteReport suite_contraction(std::uint64_t seed, int threads);
SuiteReport suite_bound_domination();

}  // namespace langevin
