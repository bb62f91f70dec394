#pragma once

// One-step transition kernels (LMC, RLMC, KLMC, RKLMC), the chain runner,
// and a shared-noise fine-grid reference integrator for the kinetic
// diffusion. Each kernel has a deterministic core taking explicit noise
// (the test seam) and an rng-driven wrapper.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "langevin/coeffs.hpp"
#include "langevin/potentials.hpp"
#include "langevin/rng.hpp"

namespace langevin {

struct ChainState {
  Eigen::VectorXd theta;
  std::optional<Eigen::VectorXd> v;
  std::int64_t step_index = 0;
};

enum class KernelKind { LMC, RLMC, KLMC, RKLMC };

struct KernelConfig {
  KernelKind kind;
  double h = 0.0;
  std::optional<double> gamma;  // required for kinetic kinds

  bool kinetic() const { return kind == KernelKind::KLMC || kind == KernelKind::RKLMC; }
};

struct StepWitness {
  std::optional<double> u;
  std::vector<Eigen::VectorXd> noises;
  std::optional<Eigen::VectorXd> midpoint;
};

// --- deterministic cores (explicit noise) ---

ChainState lmc_step_with(const ChainState& s, const PotentialSpec& pot, double h,
                         const Eigen::VectorXd& xi);

// xi1 drives the midpoint, xi2 is the independent remainder; the full-step
// noise is sqrt(u) xi1 + sqrt(1-u) xi2 (nested Brownian increments).
std::pair<ChainState, StepWitness> rlmc_step_with(const ChainState& s,
                                                  const PotentialSpec& pot, double h,
                                                  double u, const Eigen::VectorXd& xi1,
                                                  const Eigen::VectorXd& xi2);

// zeta_v / zeta_theta follow the joint law of klmc_noise_cov(gamma*h, gamma).
ChainState klmc_step_with(const ChainState& s, const PotentialSpec& pot, double gamma,
                          double h, const Eigen::VectorXd& zeta_v,
                          const Eigen::VectorXd& zeta_theta);

std::pair<ChainState, StepWitness> rklmc_step_with(
    const ChainState& s, const PotentialSpec& pot, double gamma, double h, double u,
    const Eigen::VectorXd& z1, const Eigen::VectorXd& z2, const Eigen::VectorXd& z3);

// --- rng-driven kernels ---

ChainState lmc_step(const ChainState& s, const PotentialSpec& pot, double h, Philox& rng);
std::pair<ChainState, StepWitness> rlmc_step(const ChainState& s, const PotentialSpec& pot,
                                             double h, Philox& rng);
ChainState klmc_step(const ChainState& s, const PotentialSpec& pot, double gamma, double h,
                     Philox& rng);
std::pair<ChainState, StepWitness> rklmc_step(const ChainState& s, const PotentialSpec& pot,
                                              double gamma, double h, Philox& rng);

ChainState kernel_step(const KernelConfig& k, const ChainState& s, const PotentialSpec& pot,
                       Philox& rng, StepWitness* witness = nullptr);

// --- chain runner ---

enum class RecordPolicy { FinalOnly, EveryK, Full, Witnesses };

struct Trajectory {
  std::vector<ChainState> states;        // recorded states (always contains final)
  std::vector<std::int64_t> indices;     // step index of each recorded state
  std::vector<StepWitness> witnesses;    // populated under RecordPolicy::Witnesses
};

// Default initial state: theta = minimizer, v ~ N(0, gamma I) for kinetic kinds.
ChainState default_init(const KernelConfig& k, const PotentialSpec& pot, Philox& rng);

Trajectory run_chain(const KernelConfig& k, const PotentialSpec& pot, ChainState init,
                     std::int64_t n, RecordPolicy record, std::int64_t every_k,
                     Philox& rng);

// R independent replicas, stream-split by replica index; rows of the result
// are final positions. Bitwise-deterministic for any thread count.
Eigen::MatrixXd run_replicas(const KernelConfig& k, const PotentialSpec& pot,
                             std::int64_t n, int replicas, std::uint64_t seed,
                             int threads,
                             const std::function<ChainState(Philox&)>& init_sampler = {});

// --- fine-grid reference integrator ---

// Strictly increasing times in (0, h], last element is the endpoint.
struct FineGrid {
  std::vector<double> t;
  double endpoint() const { return t.back(); }
};

FineGrid uniform_grid(double h, int substeps);
// Union of a uniform grid and extra interior split points (deduplicated).
FineGrid grid_with_splits(double h, int substeps, const std::vector<double>& splits);

// Exact OU noise pairs (zeta_v, zeta_theta), one per grid interval.
struct FineNoise {
  std::vector<Eigen::VectorXd> zv;
  std::vector<Eigen::VectorXd> zth;
};

FineNoise sample_fine_noise(const FineGrid& grid, double gamma, int p, Philox& rng);

// Kinetic path integrated with the exact OU map on each interval, gradient
// frozen at a predictor-corrector interval midpoint (second-order accurate
// in the substep). Exact for constant gradients.
struct FinePath {
  std::vector<Eigen::VectorXd> theta;  // at t=0 and each grid point
  std::vector<Eigen::VectorXd> v;
};

FinePath integrate_kinetic_fine(const Eigen::VectorXd& theta0, const Eigen::VectorXd& v0,
                                const PotentialSpec& pot, double gamma,
                                const FineGrid& grid, const FineNoise& noise);

// Aggregates fine pairs into the coarse stochastic integrals over [0, t_end]
// where t_end = grid.t[idx_end]:
//   zeta_v     = sqrt2 gamma int_0^{t_end} e^{-gamma(t_end-s)} dW
//   zeta_theta = sqrt2       int_0^{t_end} (1 - e^{-gamma(t_end-s)}) dW.
std::pair<Eigen::VectorXd, Eigen::VectorXd> aggregate_noise(const FineGrid& grid,
                                                            const FineNoise& noise,
                                                            double gamma, int idx_end);

// Position-noise integrals at many endpoints in one prefix pass. Intended for
// endpoints within a single coarse step (gamma * t_end small).
std::vector<Eigen::VectorXd> aggregate_position_noise_many(
    const FineGrid& grid, const FineNoise& noise, double gamma,
    const std::vector<int>& end_indices);

// Convenience form: state at time h after `substeps` uniform exact-OU steps.
ChainState reference_kinetic_path(const ChainState& init, const PotentialSpec& pot,
                                  double gamma, double h, int substeps,
                                  const FineNoise& shared_noise);

// --- one-step discretization-error measurement ---

struct OneStepRow {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool valid = true;  // preconditions of the bound hold
  double ratio() const { return measured > 0.0 ? bound / measured : HUGE_VAL; }
};

struct OneStepReport {
  double gamma = 0.0, eta = 0.0;
  int p = 0, replicas = 0, substeps = 0;
  double v_norm = 0.0, g_norm = 0.0;  // L2 norms of the initial state
  std::vector<OneStepRow> rows;
  bool all_bounds_hold() const;
};

// Measures coupled one-step L2 errors of KLMC and RKLMC against the fine-grid
// reference and compares them with the closed-form one-step bounds. The
// initial state is drawn from init_sampler (positions+velocities).
OneStepReport one_step_error_report(const PotentialSpec& pot,
                                    const std::function<ChainState(Philox&)>& init_sampler,
                                    double gamma, double h, int replicas, int substeps,
                                    std::uint64_t seed, int threads = 1);

// Stationary init for a Gaussian target: theta ~ N(mean, A^{-1}), v ~ N(0, gamma I).
std::function<ChainState(Philox&)> gaussian_stationary_init(const Eigen::MatrixXd& precision,
                                                            const Eigen::VectorXd& mean,
                                                            double gamma);

}  // namespace langevin
