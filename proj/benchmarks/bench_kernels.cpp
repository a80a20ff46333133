#include <random>

#include <benchmark/benchmark.h>

#include <gfalm/random_fields.hpp>
#include <gfalm/reference.hpp>
#include <gfalm/solver.hpp>
#include <gfalm/spectral.hpp>

using namespace gfalm;

namespace {

GridSpec grid_for(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  if (state.range(1) == 1) return GridSpec::line(Axis{-32.0, 64.0, m});
  return GridSpec::plane(Axis{-4.0, 8.0, m}, Axis{-4.0, 8.0, m});
}

Problem problem_for(const GridSpec& grid) {
  ProblemParams params;
  if (grid.dims() == 2) params.potential = PotentialSpec::harmonic({1.0, 1.0});
  return Problem(grid, params);
}

void BM_apply_dxx(benchmark::State& state) {
  const GridSpec grid = grid_for(state);
  std::mt19937_64 rng(1);
  const GridField u = random_field(grid, rng);
  for (auto _ : state) benchmark::DoNotOptimize(apply_dxx(u));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

void BM_resolvent(benchmark::State& state) {
  const GridSpec grid = grid_for(state);
  std::mt19937_64 rng(2);
  const GridField u = random_field(grid, rng);
  for (auto _ : state) benchmark::DoNotOptimize(resolvent_solve(u, 1.5, 0.25));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

void BM_gfalm_step(benchmark::State& state) {
  const GridSpec grid = grid_for(state);
  const Problem problem = problem_for(grid);
  SolverConfig c;
  c.tau = 0.1;
  const GfalmSolver solver(problem, c);
  const GridField u = make_initial(initial::Gaussian{}, grid, problem.p());
  for (auto _ : state) benchmark::DoNotOptimize(solver.step(u));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid.size()));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int m : {128, 512, 2048}) b->Args({m, 1});
  for (int m : {64, 128, 256}) b->Args({m, 2});
  b->ArgNames({"M", "dims"});
}

}  // namespace

BENCHMARK(BM_apply_dxx)->Apply(sizes);
BENCHMARK(BM_resolvent)->Apply(sizes);
BENCHMARK(BM_gfalm_step)->Apply(sizes);

BENCHMARK_MAIN();
