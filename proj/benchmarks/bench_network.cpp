#include <benchmark/benchmark.h>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "chimera/model.hpp"
#include "chimera/network.hpp"

using namespace chimera;

namespace {

system_params sized_params(std::size_t n) {
    system_params p;
    p.pop1 = {n, 5.05, 1.0};
    p.pop2 = {n, 5.06, 0.1};
    p.coupling = {0.9, 9.0, 3.0, 0.0};
    return p;
}

network_state spread_state(const system_params& p) {
    return synthesize_network_state(p, 0.7, 0.95, -0.5, p.coupling.mu, 42);
}

void bm_network_rhs(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const system_params p = sized_params(n);
    const network_state s = spread_state(p);
    for (auto _ : state) {
        network_deriv d = network_rhs(s, p, std::nullopt);
        benchmark::DoNotOptimize(d.dphases1.data());
        benchmark::DoNotOptimize(d.dphases2.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n));
}
BENCHMARK(bm_network_rhs)->Arg(256)->Arg(1024)->Arg(4096);

// The naive pairwise double sum the order-parameter form replaces.
void bm_pairwise_rhs(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const system_params p = sized_params(n);
    const network_state s = spread_state(p);
    const std::vector<double> w1 = sample_frequencies(p.pop1);
    const std::vector<double> w2 = sample_frequencies(p.pop2);
    std::vector<double> d1(n), d2(n);
    for (auto _ : state) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = w1[i];
            for (std::size_t j = 0; j < n; ++j) {
                acc += p.coupling.k1 / static_cast<double>(n) *
                       std::sin(s.phases1[j] - s.phases1[i]);
                acc += p.coupling.mu / static_cast<double>(n) *
                       std::sin(s.phases2[j] - s.phases1[i]);
            }
            d1[i] = acc;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double acc = w2[i];
            for (std::size_t j = 0; j < n; ++j) {
                acc += p.coupling.k2 / static_cast<double>(n) *
                       std::sin(s.phases2[j] - s.phases2[i]);
                acc += p.coupling.mu / static_cast<double>(n) *
                       std::sin(s.phases1[j] - s.phases2[i]);
            }
            d2[i] = acc;
        }
        benchmark::DoNotOptimize(d1.data());
        benchmark::DoNotOptimize(d2.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(2 * n));
}
BENCHMARK(bm_pairwise_rhs)->Arg(256)->Arg(1024);

void bm_integrate_network(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const system_params p = sized_params(n);
    const network_state s = spread_state(p);
    adaptive_law_spec law;
    law.target = adaptive_target::inter;
    law.epsilon = 0.02;
    law.kind = linear_feedback{2.5, 10.0};
    integration_options opt;
    opt.dt = 0.01;
    opt.t_final = 1.0;
    for (auto _ : state) {
        trajectory traj = integrate_network(p, law, s, opt);
        benchmark::DoNotOptimize(traj.r1.data());
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(bm_integrate_network)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
