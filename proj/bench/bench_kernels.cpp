// Serial reference vs OpenMP kernels. Run with --benchmark_filter=... as usual.

#include <benchmark/benchmark.h>

#include <random>

#include "polybern/approx.hpp"
#include "polybern/catalog.hpp"
#include "polybern/presets.hpp"

using namespace polybern;
namespace k = polybern::kernels;

namespace {

k::LatticeGrid grid(std::int64_t side) {
  k::LatticeGrid g;
  g.shape = {side, side};
  g.values.assign(static_cast<std::size_t>(side * side), 0.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& v : g.values) v = u(rng);
  return g;
}

const std::vector<k::LatticeShift> kSquare = {{{0, 0}, 0.25}, {{1, 0}, 0.25}, {{0, 1}, 0.25}, {{1, 1}, 0.25}};

template <k::Exec E>
void BM_lattice_convolve(benchmark::State& state) {
  const auto g = grid(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(k::lattice_convolve(E, g, kSquare));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.cells()));
}

template <k::Exec E>
void BM_convolve_1d(benchmark::State& state) {
  std::vector<double> a(static_cast<std::size_t>(state.range(0))), b(a.size());
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& v : a) v = u(rng);
  for (auto& v : b) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(k::convolve_1d(E, a, b));
}

template <k::Exec E>
void BM_bernstein_apply_many(benchmark::State& state) {
  const ExpFamily fam(preset("square").support);
  const auto f = make_function("cos", 2);
  std::vector<Point> xs;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) xs.push_back((Point(2) << i / 15.0, j / 15.0).finished());
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(bernstein_apply_many(fam, f.value, N, xs, E));
}

}  // namespace

BENCHMARK(BM_lattice_convolve<k::Exec::serial>)->Arg(256)->Arg(1024);
BENCHMARK(BM_lattice_convolve<k::Exec::parallel>)->Arg(256)->Arg(1024)->UseRealTime();
BENCHMARK(BM_convolve_1d<k::Exec::serial>)->Arg(4096)->Arg(32768);
BENCHMARK(BM_convolve_1d<k::Exec::parallel>)->Arg(4096)->Arg(32768)->UseRealTime();
BENCHMARK(BM_bernstein_apply_many<k::Exec::serial>)->Arg(16)->Arg(64);
BENCHMARK(BM_bernstein_apply_many<k::Exec::parallel>)->Arg(16)->Arg(64)->UseRealTime();

BENCHMARK_MAIN();
