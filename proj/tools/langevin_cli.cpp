// Command-line frontend: run experiments from JSON configs, print the
// iteration-count table, and drive the validation suites.

#include <CLI11.hpp>
#include <cstdint>
#include <optional>
#include <string>

#include "langevin/harness.hpp"
#include "langevin/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Langevin Monte Carlo samplers, error-bound calculators, and "
               "verification suites"};
  app.require_subcommand(1);
  app.fallthrough();  // allow --threads after the subcommand name

  int threads = langevin::default_thread_count();
  app.add_option("--threads", threads, "worker thread count (default: $LANGEVIN_THREADS "
                                       "or hardware concurrency)");

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "path to config.json")->required();
  std::uint64_t seed_value = 0;
  auto* seed_opt = run->add_option("--seed", seed_value, "override the config seed");

  std::string table_csv;
  auto* table = app.add_subcommand("table1", "print the iteration-count table");
  table->add_option("--csv", table_csv, "also write the table as CSV");

  std::string suite, validate_json;
  std::uint64_t validate_seed = 0;
  auto* validate = app.add_subcommand("validate", "run a validation suite");
  validate->add_option("suite", suite, "one of: coeffs-stability, noise-covariance, "
                                       "one-step-error, contraction, bound-domination")
      ->required();
  validate->add_option("--json", validate_json, "write JSON detail per check");
  validate->add_option("--seed", validate_seed, "suite RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  if (run->parsed()) {
    if (seed_opt->count() > 0) seed_override = seed_value;
    return langevin::cmd_run(config_path, seed_override, threads);
  }
  if (table->parsed()) return langevin::cmd_table1(table_csv);
  return langevin::cmd_validate(suite, validate_json, validate_seed, threads);
}
