#include <benchmark/benchmark.h>

#include <memory>

#include "treesir/grid.hpp"
#include "treesir/integrate.hpp"
#include "treesir/model.hpp"
#include "treesir/rhs.hpp"
#include "treesir/state.hpp"
#include "treesir/wavespeed.hpp"

namespace {

const treesir::EpidemicParams kLattice{2.0, 1.0, 1.0, 0.9, 1};
const treesir::EpidemicParams kTree{2.0, 1.0, 1.0, 0.9, 2};

void BM_Nonlinearity(benchmark::State& state) {
  double v = 0.0;
  for (auto _ : state) {
    v += 1e-6;
    benchmark::DoNotOptimize(treesir::nonlinearity(v, kLattice));
  }
}
BENCHMARK(BM_Nonlinearity);

void BM_LambertW0(benchmark::State& state) {
  double x = 0.5;
  for (auto _ : state) {
    x = x < 1e5 ? x * 1.001 : 0.5;
    benchmark::DoNotOptimize(treesir::lambert_w0(x));
  }
}
BENCHMARK(BM_LambertW0);

void BM_AnalyticSpeed(benchmark::State& state) {
  treesir::EpidemicParams p = kLattice;
  for (auto _ : state) {
    p.lambda = p.lambda < 10.0 ? p.lambda * 1.01 : 0.1;
    benchmark::DoNotOptimize(treesir::analytic_speed(p));
  }
}
BENCHMARK(BM_AnalyticSpeed);

void BM_KppRhs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto grid = std::make_shared<const treesir::RadialGrid>(treesir::build_grid(1, n));
  auto st = treesir::make_kpp_initial(grid, treesir::lattice_block_ic(0.9, 0.01, -10, 10));
  std::vector<double> out(grid->size());
  for (auto _ : state) {
    treesir::kpp_rhs_into(*grid, kLattice, st.forcing, st.cum.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid->size()));
}
BENCHMARK(BM_KppRhs)->Arg(256)->Arg(2000);

void BM_IntegrateTree(benchmark::State& state) {
  auto grid = std::make_shared<const treesir::RadialGrid>(treesir::build_grid(2, 100));
  auto init = treesir::make_kpp_initial(grid, treesir::tree_root_ic(0.9, 0.01));
  for (auto _ : state) {
    auto traj = treesir::integrate_kpp(init, kTree, {0.0, 5.0, 5.0});
    benchmark::DoNotOptimize(traj.back().cum.data());
  }
}
BENCHMARK(BM_IntegrateTree);

}  // namespace

BENCHMARK_MAIN();
