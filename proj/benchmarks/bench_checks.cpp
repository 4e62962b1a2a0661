#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "totpos/checks.hpp"
#include "totpos/lattice.hpp"
#include "totpos/monte_carlo.hpp"
#include "totpos/order_stats.hpp"

using namespace totpos;

namespace {

LatticeDensity random_lattice(std::uint64_t seed,
                              std::vector<std::size_t> shape) {
  std::mt19937_64 rng(seed);
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  std::vector<double> v(n);
  for (auto& x : v) x = 0.1 + uniform01(rng);
  return LatticeDensity::with_unit_axes(std::move(shape), std::move(v),
                                        Interpretation::density_samples);
}

std::vector<std::size_t> arg_shape(const benchmark::State& state) {
  switch (state.range(0)) {
    case 0: return {32, 32};
    case 1: return {12, 12, 12};
    default: return {6, 6, 6, 6};
  }
}

void BM_CheckPairs(benchmark::State& state) {
  const auto g = random_lattice(42, arg_shape(state));
  const auto alpha = Direction::all_positive(g.dim());
  std::uint64_t quads = 0;
  for (auto _ : state) {
    const auto r = check_pairs(g, alpha);
    benchmark::DoNotOptimize(r.min_margin);
    quads = r.quadruples_checked;
  }
  state.counters["quadruples/s"] = benchmark::Counter(
      static_cast<double>(quads) * state.iterations(), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_CheckPairs)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_CheckPairsLog(benchmark::State& state) {
  const auto g = random_lattice(42, arg_shape(state));
  const auto alpha = Direction::all_positive(g.dim());
  CheckOptions opts;
  opts.log_domain = true;
  for (auto _ : state) {
    const auto r = check_pairs(g, alpha, opts);
    benchmark::DoNotOptimize(r.min_margin);
  }
}
BENCHMARK(BM_CheckPairsLog)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_CheckFull(benchmark::State& state) {
  const auto g = random_lattice(43, {8, 8, 8});
  const auto alpha = Direction::all_positive(3);
  std::uint64_t quads = 0;
  for (auto _ : state) {
    const auto r = check_full(g, alpha);
    benchmark::DoNotOptimize(r.min_margin);
    quads = r.quadruples_checked;
  }
  state.counters["quadruples/s"] = benchmark::Counter(
      static_cast<double>(quads) * state.iterations(), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_CheckFull)->Unit(benchmark::kMillisecond);

void BM_CheckChain(benchmark::State& state) {
  const auto g = random_lattice(44, {8, 8, 8});
  const auto alpha = Direction::all_positive(3);
  for (auto _ : state) {
    const auto r = check_chain(g, alpha);
    benchmark::DoNotOptimize(r.min_margin);
  }
}
BENCHMARK(BM_CheckChain)->Unit(benchmark::kMillisecond);

void BM_SurvivalUpper(benchmark::State& state) {
  std::mt19937_64 rng(45);
  std::vector<std::size_t> shape = {16, 16, 16};
  std::vector<double> v(16 * 16 * 16);
  double mass = 0.0;
  for (auto& x : v) {
    x = uniform01(rng);
    mass += x;
  }
  for (auto& x : v) x /= mass;
  const auto g =
      LatticeDensity::with_unit_axes(shape, std::move(v), Interpretation::pmf);
  for (auto _ : state) {
    const auto s = survival_upper(g);
    benchmark::DoNotOptimize(s.values().data());
  }
}
BENCHMARK(BM_SurvivalUpper)->Unit(benchmark::kMicrosecond);

void BM_RegIncBeta(benchmark::State& state) {
  std::mt19937_64 rng(46);
  std::vector<double> us(1024);
  for (auto& u : us) u = uniform01(rng);
  std::size_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reg_inc_beta(us[k++ & 1023], 3.0, 7.0));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RegIncBeta);

void BM_PairDensityGrid(benchmark::State& state) {
  const auto model = DistributionModel::parse("exp:1");
  const OrderStatContext c(5, 2, 4);
  std::vector<double> grid(64);
  for (int t = 0; t < 64; ++t) grid[t] = model.quantile(0.01 + 0.97 * t / 63.0);
  for (auto _ : state) {
    const auto g = discretize_pair_density(model, c, grid, grid);
    benchmark::DoNotOptimize(g.values().data());
  }
  state.SetItemsProcessed(state.iterations() * 64 * 64);
}
BENCHMARK(BM_PairDensityGrid)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
