#include <benchmark/benchmark.h>

#include "langevin/coeffs.hpp"
#include "langevin/potentials.hpp"
#include "langevin/samplers.hpp"

namespace {

using namespace langevin;

PotentialSpec bench_potential(int p) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) A(i, i) = 1.0 + 9.0 * i / std::max(1, p - 1);
  return make_gaussian(A, Eigen::VectorXd::Zero(p));
}

void BM_Coeffs(benchmark::State& state) {
  double eta = 1e-4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(klmc_coeffs(eta));
    eta *= 1.0000001;
  }
}
BENCHMARK(BM_Coeffs);

void BM_KlmcNoiseCov(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(klmc_noise_cov(0.1, 5.0));
}
BENCHMARK(BM_KlmcNoiseCov);

void BM_RklmcNoiseCov(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rklmc_noise_cov(0.1, 5.0, 0.37));
}
BENCHMARK(BM_RklmcNoiseCov);

void BM_KernelStep(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  const auto kind = static_cast<KernelKind>(state.range(1));
  const PotentialSpec pot = bench_potential(p);
  KernelConfig k;
  k.kind = kind;
  k.h = 0.01;
  if (k.kinetic()) k.gamma = 5.0 * pot.M;
  Philox rng = replica_rng(1, 0);
  ChainState s = default_init(k, pot, rng);
  for (auto _ : state) {
    s = kernel_step(k, s, pot, rng);
    benchmark::DoNotOptimize(s.theta.data());
  }
}
BENCHMARK(BM_KernelStep)
    ->ArgsProduct({{2, 16, 128},
                   {static_cast<long>(KernelKind::LMC), static_cast<long>(KernelKind::RLMC),
                    static_cast<long>(KernelKind::KLMC),
                    static_cast<long>(KernelKind::RKLMC)}});

}  // namespace

BENCHMARK_MAIN();
