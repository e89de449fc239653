#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "concbound/bounds.hpp"
#include "concbound/concentration.hpp"
#include "concbound/families.hpp"
#include "concbound/quadrature.hpp"

using namespace concbound;

static void BM_QExactLattice(benchmark::State& state) {
    const long len = state.range(0);
    std::vector<double> weights(static_cast<std::size_t>(len));
    double total = 0.0;
    for (long k = 0; k < len; ++k) {
        const double x = (static_cast<double>(k) - len / 2.0) / (len / 8.0);
        weights[static_cast<std::size_t>(k)] = std::exp(-0.5 * x * x);
        total += weights[static_cast<std::size_t>(k)];
    }
    for (double& w : weights) {
        w /= total;
    }
    const LatticeDist lat(0.0, 1.0, std::move(weights));
    for (auto _ : state) {
        benchmark::DoNotOptimize(q_exact(lat, static_cast<double>(len) / 16.0));
    }
}
BENCHMARK(BM_QExactLattice)->Arg(1 << 12)->Arg(1 << 16)->Arg(1 << 20)
    ->Unit(benchmark::kMicrosecond);

static void BM_CharfnIntegral(benchmark::State& state) {
    const long n = state.range(0);
    const DiscreteDist coin = fair_coin();
    for (auto _ : state) {
        benchmark::DoNotOptimize(charfn_power_integral(coin, n, 1.0, 1.0));
    }
}
BENCHMARK(BM_CharfnIntegral)->Arg(2)->Arg(64)->Arg(1024)->Unit(benchmark::kMicrosecond);

static void BM_SharpenedBound(benchmark::State& state) {
    const long n = state.range(0);
    const DiscreteDist f = counterexample(static_cast<double>(n));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sharpened_rhs_1_13(f, n, 1.0));
    }
}
BENCHMARK(BM_SharpenedBound)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
