#include <benchmark/benchmark.h>

#include "urnkit/drift.hpp"
#include "urnkit/exact.hpp"
#include "urnkit/ldp.hpp"
#include "urnkit/model.hpp"

namespace {

urnkit::UrnConfig linear_config() {
    urnkit::UrnConfig c;
    c.matrix = {4, 1, 5, 4};
    c.skew = urnkit::SkewSpec::identity();
    return c;
}

urnkit::UrnConfig quadratic_config() {
    urnkit::UrnConfig c;
    c.matrix = {1, 2, 3, 4};
    c.skew = urnkit::SkewSpec::power_family(2);
    c.y1_0 = 2;
    c.y2_0 = 1;
    return c;
}

void BM_SimulatePath(benchmark::State& state) {
    auto c = linear_config();
    auto n = static_cast<std::uint64_t>(state.range(0));
    std::uint64_t seed = 1;
    for (auto _ : state) {
        auto path = urnkit::simulate_path(c, n, seed++);
        benchmark::DoNotOptimize(path.states.back().z);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(n));
}
BENCHMARK(BM_SimulatePath)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_ExactDistribution(benchmark::State& state) {
    auto c = quadratic_config();
    auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto dist = urnkit::dp_distribution(c, n);
        benchmark::DoNotOptimize(dist.support.back().probability);
    }
}
BENCHMARK(BM_ExactDistribution)->Arg(100)->Arg(500)->Arg(2000);

void BM_ExactTail(benchmark::State& state) {
    auto c = linear_config();
    auto dist = urnkit::dp_distribution(c, static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(urnkit::exact_tail_probability(dist, 0.05, 0.309016994));
}
BENCHMARK(BM_ExactTail)->Arg(500)->Arg(2000);

void BM_DriftGrid(benchmark::State& state) {
    urnkit::DriftProfile p{{1, 2, 3, 4}, urnkit::SkewSpec::power_family(2)};
    for (auto _ : state) benchmark::DoNotOptimize(urnkit::monotonicity_check(p).pass);
}
BENCHMARK(BM_DriftGrid);

void BM_KhatStatespace(benchmark::State& state) {
    auto c = linear_config();
    for (auto _ : state)
        benchmark::DoNotOptimize(
            urnkit::fit_khat_statespace(c, static_cast<std::uint64_t>(state.range(0))));
}
BENCHMARK(BM_KhatStatespace)->Arg(200)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
