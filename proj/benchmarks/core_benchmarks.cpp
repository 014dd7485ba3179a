#include <benchmark/benchmark.h>

#include "nvinfo/bootstrap.hpp"
#include "nvinfo/combine.hpp"
#include "nvinfo/dataset.hpp"
#include "nvinfo/random.hpp"
#include "nvinfo/spectral.hpp"
#include "nvinfo/statistics.hpp"

#include <vector>

namespace {

const nvinfo::Dataset& sales() {
    static const nvinfo::Dataset d = nvinfo::load_csv(NVINFO_FIXTURES_DIR "/sales_ab.csv");
    return d;
}

nvinfo::SymMatrix random_spd(std::size_t m, std::uint64_t seed) {
    nvinfo::StreamRng rng(seed);
    std::vector<double> g(m * m);
    for (auto& x : g) x = rng.normal();
    std::vector<double> a(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < m; ++k) a[i * m + j] += g[i * m + k] * g[j * m + k];
    for (std::size_t i = 0; i < m; ++i) a[i * m + i] += 1.0;
    return nvinfo::SymMatrix(m, std::move(a));
}

}  // namespace

static void BM_NormalInverseCdf(benchmark::State& state) {
    double p = 0.0001;
    for (auto _ : state) {
        benchmark::DoNotOptimize(nvinfo::normal_inverse_cdf(p));
        p += 0.0001;
        if (p >= 1.0) p = 0.0001;
    }
}
BENCHMARK(BM_NormalInverseCdf);

static void BM_SymEigen(benchmark::State& state) {
    const auto a = random_spd(static_cast<std::size_t>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(nvinfo::sym_eigen(a));
}
BENCHMARK(BM_SymEigen)->Arg(2)->Arg(8)->Arg(32);

static void BM_BootstrapJoint(benchmark::State& state) {
    nvinfo::BootstrapSettings settings;
    settings.nboots = static_cast<std::size_t>(state.range(0));
    settings.threads = static_cast<unsigned>(state.range(1));
    const auto target = nvinfo::StatisticDescriptor::normal_quantile("A", 0.2326);
    const std::vector sources{nvinfo::StatisticDescriptor::mean("B"), nvinfo::StatisticDescriptor::median("B")};
    for (auto _ : state) benchmark::DoNotOptimize(nvinfo::bootstrap_joint(sales(), target, sources, settings));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BootstrapJoint)->Args({1000, 1})->Args({5000, 1})->Args({5000, 0})->Unit(benchmark::kMillisecond);

static void BM_Mvar(benchmark::State& state) {
    nvinfo::Problem problem;
    problem.target = nvinfo::StatisticDescriptor::normal_quantile("A", 0.2326);
    problem.sources = {{nvinfo::StatisticDescriptor::mean("B"), 115.3846, 1912.8 / 260, false},
                       {nvinfo::StatisticDescriptor::median("B"), 100.0, 3227.319 / 260, false}};
    nvinfo::BootstrapSettings settings;
    for (auto _ : state) benchmark::DoNotOptimize(nvinfo::mvar(sales(), problem, settings));
}
BENCHMARK(BM_Mvar)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
