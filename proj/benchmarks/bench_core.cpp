#include <benchmark/benchmark.h>

#include <ntn/linkbudget.hpp>
#include <ntn/mobility.hpp>
#include <ntn/orbit.hpp>
#include <ntn/retx.hpp>
#include <ntn/scenario.hpp>

namespace {

void BM_Snr(benchmark::State& state) {
    const ntn::LinkBudgetInput budget = ntn::budget_fixture("geo_ul");
    for (auto _ : state) benchmark::DoNotOptimize(ntn::snr(budget));
}
BENCHMARK(BM_Snr);

void BM_PropagatePass(benchmark::State& state) {
    const ntn::OrbitScenario leo{600.0, 10.0};
    const double step_s = static_cast<double>(state.range(0)) / 10.0;
    for (auto _ : state) benchmark::DoNotOptimize(ntn::propagate_pass(leo, true, step_s));
}
BENCHMARK(BM_PropagatePass)->Arg(10)->Arg(1);  // 1.0 s and 0.1 s steps

void BM_ExpectedSubframes(benchmark::State& state) {
    const ntn::BlerCurve curve = ntn::default_scenario().curve();
    const ntn::RetxPolicy blind{ntn::RetxKind::BlindPlusArq, 1, 4, 512};
    for (auto _ : state)
        benchmark::DoNotOptimize(ntn::expected_subframes(blind, curve, -8.0));
}
BENCHMARK(BM_ExpectedSubframes);

void BM_MonteCarloRetx(benchmark::State& state) {
    const ntn::BlerCurve curve = ntn::default_scenario().curve();
    const ntn::RetxPolicy harq{ntn::RetxKind::HarqCombining, 32, 4, 1};
    const auto trials = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(ntn::monte_carlo_retx(harq, curve, -6.0, trials, 7, 1));
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            state.range(0));
}
BENCHMARK(BM_MonteCarloRetx)->Arg(10000)->Arg(100000);

void BM_SwitchSchedule(benchmark::State& state) {
    ntn::ConstellationPlane plane;
    plane.n_satellites = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(ntn::switch_schedule(plane, 10.0, 0.0, 7200.0));
}
BENCHMARK(BM_SwitchSchedule)->Arg(10)->Arg(70);

}  // namespace

BENCHMARK_MAIN();
