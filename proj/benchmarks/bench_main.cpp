#include <benchmark/benchmark.h>

#include <random>

#include "didrand/inference.hpp"
#include "didrand/panel.hpp"

using namespace didrand;

namespace {

PanelSample balanced(std::size_t per_cell) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> noise;
    std::vector<double> y;
    LabelVector time;
    LabelVector affected;
    for (std::size_t cell = 0; cell < 4; ++cell) {
        for (std::size_t i = 0; i < per_cell; ++i) {
            y.push_back(noise(rng));
            affected.push_back(Label(cell / 2));
            time.push_back(Label(cell % 2));
        }
    }
    return PanelSample(std::move(y), std::move(time), std::move(affected));
}

void BM_DidValue(benchmark::State& state) {
    const auto s = balanced(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(did_value(s.y(), s.time(), s.affected()));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.size()));
}
BENCHMARK(BM_DidValue)->Arg(5)->Arg(20)->Arg(250);

void BM_SimulateNull(benchmark::State& state) {
    const auto s = balanced(static_cast<std::size_t>(state.range(0)));
    const RandomizationScheme scheme{static_cast<Margins>(state.range(1)), Mode::FixedMargins};
    for (auto _ : state) benchmark::DoNotOptimize(simulate_null(s, scheme, 1000, 42));
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_SimulateNull)
    ->Args({20, static_cast<int>(Margins::AffectedOnly)})
    ->Args({20, static_cast<int>(Margins::Dual)})
    ->Args({250, static_cast<int>(Margins::Dual)})
    ->Unit(benchmark::kMillisecond);

void BM_EnumerateNull(benchmark::State& state) {
    const auto s = balanced(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_null(s, RandomizationScheme{}));
}
BENCHMARK(BM_EnumerateNull)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
