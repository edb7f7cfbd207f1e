#include <complex>
#include <memory>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "vper/exp_sum.hpp"
#include "vper/periodization.hpp"
#include "vper/test_function.hpp"

using namespace vper;

namespace {

std::vector<double> random_points(int d, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> pts(static_cast<std::size_t>(d) * n);
  for (auto& x : pts) x = u(rng);
  return pts;
}

std::vector<double> random_freqs(std::size_t n, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> mu(n);
  for (auto& m : mu) m = u(rng);
  return mu;
}

// Lattice sums of a Gaussian in d = 3, radius 6, over state.range(0) points.
void periodize(benchmark::State& state, Exec exec) {
  const int d = 3;
  const TestFunction f(std::make_shared<GaussianProfile>(d, 1.0));
  const auto rho = sample_rotation(d, 7);
  const auto pts = random_points(d, static_cast<std::size_t>(state.range(0)), 11);
  std::size_t terms = 0;
  for (auto _ : state) {
    auto g = periodize_batch(f, rho, pts, 6.0, exec, &terms);
    benchmark::DoNotOptimize(g.data());
  }
  state.counters["terms"] = static_cast<double>(terms);
  state.counters["threads"] = exec == Exec::Parallel ? omp_get_max_threads() : 1;
}

void expsum_direct(benchmark::State& state, Exec exec) {
  const auto mu = random_freqs(static_cast<std::size_t>(state.range(0)), 50.0, 3);
  const expsum::Grid grid{0.0, 1e-3, 1u << 14};
  for (auto _ : state) {
    auto g = expsum::direct(mu, {}, grid, exec);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(grid.count));
}

void expsum_nufft(benchmark::State& state) {
  const auto mu = random_freqs(static_cast<std::size_t>(state.range(0)), 50.0, 3);
  const expsum::Grid grid{0.0, 1e-3, 1u << 14};
  for (auto _ : state) {
    auto g = expsum::nufft(mu, {}, grid);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(grid.count));
}

void moment(benchmark::State& state, Exec exec) {
  const auto mu = random_freqs(static_cast<std::size_t>(state.range(0)), 100.0, 5);
  for (auto _ : state) benchmark::DoNotOptimize(expsum::l2_moment(mu, -3.0, 5.0, exec));
}

}  // namespace

BENCHMARK_CAPTURE(periodize, serial, Exec::Serial)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(periodize, parallel, Exec::Parallel)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(expsum_direct, serial, Exec::Serial)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(expsum_direct, parallel, Exec::Parallel)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(expsum_nufft)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(moment, serial, Exec::Serial)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(moment, parallel, Exec::Parallel)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
