#include <benchmark/benchmark.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "chimera/signal.hpp"

using namespace chimera;

namespace {

std::vector<double> breathing_series(std::size_t n, double dt) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = dt * static_cast<double>(i);
        out[i] = 0.4 + 0.3 * std::sin(0.02 * t) + 0.01 * std::sin(1.7 * t);
    }
    return out;
}

void bm_savitzky_golay(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::vector<double> series = breathing_series(n, 0.1);
    for (auto _ : state) {
        std::vector<double> smooth = savitzky_golay(series, 101, 3);
        benchmark::DoNotOptimize(smooth.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(bm_savitzky_golay)->Arg(20000)->Unit(benchmark::kMillisecond);

void bm_oscillation_metrics(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::vector<double> series = breathing_series(n, 0.1);
    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i) times[i] = 0.1 * static_cast<double>(i);
    for (auto _ : state) {
        oscillation_stats stats = oscillation_metrics(series, times);
        benchmark::DoNotOptimize(stats.amplitude);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(bm_oscillation_metrics)->Arg(50000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
