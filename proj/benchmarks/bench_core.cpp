#include <benchmark/benchmark.h>

#include "dirate/estimators.hpp"
#include "dirate/markov.hpp"
#include "dirate/model_zoo.hpp"

namespace {

void BM_simulate_joint(benchmark::State& state) {
    auto model = dirate::random_positive_joint_model(1, 2, 2, 7);
    const std::int64_t n = state.range(0);
    std::uint64_t seed = 1;
    for (auto _ : state) {
        auto pair = dirate::simulate(model, n, seed++);
        benchmark::DoNotOptimize(pair.x().data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_simulate_joint)->Arg(1 << 14)->Arg(1 << 20);

void BM_count_blocks(benchmark::State& state) {
    auto model = dirate::random_positive_joint_model(2, 2, 2, 7);
    auto pair = dirate::simulate(model, state.range(0), 1);
    for (auto _ : state) {
        auto counts = dirate::count_blocks(pair);
        benchmark::DoNotOptimize(counts.n());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_count_blocks)->Arg(1 << 14)->Arg(1 << 20);

void BM_plugin_di(benchmark::State& state) {
    auto model = dirate::random_positive_joint_model(1, 2, 2, 7);
    auto counts = dirate::count_blocks(dirate::simulate(model, state.range(0), 1));
    for (auto _ : state) {
        auto est = dirate::plugin_di(counts);
        benchmark::DoNotOptimize(est.i_hat);
    }
}
BENCHMARK(BM_plugin_di)->Arg(1 << 14)->Arg(1 << 20);

void BM_lr_statistic_di(benchmark::State& state) {
    auto model = dirate::random_positive_joint_model(1, 2, 2, 7);
    auto counts = dirate::count_blocks(dirate::simulate(model, state.range(0), 1));
    for (auto _ : state) {
        double delta = dirate::lr_statistic_di(counts);
        benchmark::DoNotOptimize(delta);
    }
}
BENCHMARK(BM_lr_statistic_di)->Arg(1 << 20);

void BM_stationary_law(benchmark::State& state) {
    auto model = dirate::random_positive_joint_model(static_cast<int>(state.range(0)), 2, 2, 7);
    for (auto _ : state) {
        auto law = dirate::stationary_law(model);
        benchmark::DoNotOptimize(law.context_pmf.pmf().data());
    }
}
BENCHMARK(BM_stationary_law)->Arg(1)->Arg(2)->Arg(3);

void BM_sigma_sq_di(benchmark::State& state) {
    auto model = dirate::random_positive_joint_model(static_cast<int>(state.range(0)), 2, 2, 7);
    for (auto _ : state) {
        double sigma_sq = dirate::sigma_sq_di(model);
        benchmark::DoNotOptimize(sigma_sq);
    }
}
BENCHMARK(BM_sigma_sq_di)->Arg(1)->Arg(2);

} // namespace

BENCHMARK_MAIN();
