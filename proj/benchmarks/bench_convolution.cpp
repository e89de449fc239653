#include <benchmark/benchmark.h>

#include <vector>

#include "concbound/convolution.hpp"
#include "concbound/families.hpp"
#include "concbound/measure.hpp"

using namespace concbound;

static void BM_LatticeConvPower(benchmark::State& state) {
    const long n = state.range(0);
    const LatticeDist base(0.0, 1.0, std::vector<double>(1000, 1e-3));
    for (auto _ : state) {
        benchmark::DoNotOptimize(conv_power(base, n, 1e-16));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_LatticeConvPower)->Arg(1000)->Arg(10000)->Arg(100000)->Arg(1000000)
    ->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNLogN);

static void BM_DenseConvolve(benchmark::State& state) {
    const long m = state.range(0);
    std::vector<Atom> atoms;
    for (long k = 0; k < m; ++k) {
        atoms.push_back({static_cast<double>(k) * 0.5, 1.0 / static_cast<double>(m)});
    }
    const DiscreteDist d(std::move(atoms));
    for (auto _ : state) {
        benchmark::DoNotOptimize(convolve(d, d));
    }
}
BENCHMARK(BM_DenseConvolve)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

static void BM_MixtureExpand(benchmark::State& state) {
    const long n = state.range(0);
    const MixtureSpec spec(0.3, fair_coin(), DiscreteDist::delta(2.0));
    const DiscreteDist h = DiscreteDist::delta(0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mixture_expand(spec, h, n));
    }
}
BENCHMARK(BM_MixtureExpand)->Arg(4)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);

static void BM_BinomialPmf(benchmark::State& state) {
    const long n = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(binomial_pmf(n, 0.3));
    }
}
BENCHMARK(BM_BinomialPmf)->Arg(1000)->Arg(100000)->Unit(benchmark::kMicrosecond);
