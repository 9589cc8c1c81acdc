#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "spectring/disorder.hpp"
#include "spectring/eigensolver.hpp"
#include "spectring/rng.hpp"
#include "spectring/shooting.hpp"
#include "spectring/string.hpp"
#include "spectring/subordinator.hpp"
#include "spectring/walk.hpp"

namespace {

using namespace spectring;

KreinString random_trap_string(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> tau(n + 1);
  for (double& t : tau)
    t = rng.log_uniform(0.5, 2.0);
  return build_string(decompose_rates(RateField::trap(tau), 2.0));
}

void BM_decompose_and_build(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  Rng rng(7);
  std::vector<double> tau(n + 1);
  for (double& t : tau)
    t = rng.log_uniform(0.5, 2.0);
  const RateField rates = RateField::trap(tau);
  for (auto _ : state) {
    const KreinString s = build_string(decompose_rates(rates, 2.0));
    benchmark::DoNotOptimize(s.total_mass());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_decompose_and_build)->Range(1 << 10, 1 << 20)->Complexity();

void BM_lowest_eigenvalues(benchmark::State& state) {
  const KreinString s =
      random_trap_string(static_cast<std::size_t>(state.range(0)), 11);
  for (auto _ : state) {
    const Spectrum spec = eigenvalues(s, BoundaryCondition::dirichlet, 3);
    benchmark::DoNotOptimize(spec.eigenvalues[0]);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_lowest_eigenvalues)->Range(1 << 10, 1 << 16)->Complexity();

void BM_sturm_count(benchmark::State& state) {
  const KreinString s =
      random_trap_string(static_cast<std::size_t>(state.range(0)), 13);
  const Pencil p = assemble_pencil(s, BoundaryCondition::dirichlet);
  for (auto _ : state)
    benchmark::DoNotOptimize(count_leq(p, 1.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_sturm_count)->Range(1 << 10, 1 << 20)->Complexity();

void BM_shoot(benchmark::State& state) {
  const KreinString s =
      random_trap_string(static_cast<std::size_t>(state.range(0)), 17);
  for (auto _ : state)
    benchmark::DoNotOptimize(shoot_psi(s, 0.5).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_shoot)->Range(1 << 10, 1 << 20)->Complexity();

void BM_sample_subordinator(benchmark::State& state) {
  const double epsilon = std::pow(10.0, -static_cast<double>(state.range(0)));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const SubordinatorPath p = sample_subordinator(0.5, 1.0, epsilon, ++seed);
    benchmark::DoNotOptimize(p.jumps.size());
  }
}
BENCHMARK(BM_sample_subordinator)->DenseRange(3, 6);

void BM_annealed_counting_small(benchmark::State& state) {
  AnnealedConfig cfg;
  cfg.alpha = 0.5;
  cfg.x_grid = {1e2, 1e3, 1e4};
  cfg.samples = 50;
  cfg.epsilon = 1e-4;
  cfg.seed = 3;
  cfg.workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const CountingCurve c = annealed_counting(cfg);
    benchmark::DoNotOptimize(c.slope);
  }
}
BENCHMARK(BM_annealed_counting_small)->Arg(1)->Arg(4);

} // namespace

BENCHMARK_MAIN();
