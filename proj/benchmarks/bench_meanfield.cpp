#include <benchmark/benchmark.h>

#include "chimera/gspt.hpp"
#include "chimera/meanfield.hpp"
#include "chimera/model.hpp"

using namespace chimera;

namespace {

system_params feedback_params() {
    system_params p;
    p.pop1 = {1000, 5.05, 1.0};
    p.pop2 = {1000, 5.06, 0.1};
    p.coupling = {0.9, 9.0, 3.0, 0.0};
    return p;
}

adaptive_law_spec feedback_law() {
    adaptive_law_spec law;
    law.target = adaptive_target::inter;
    law.epsilon = 0.02;
    law.kind = linear_feedback{2.5, 10.0};
    return law;
}

void bm_integrate_reduced(benchmark::State& state) {
    const system_params p = feedback_params();
    const adaptive_law_spec law = feedback_law();
    meanfield_state init;
    init.rho1 = 0.99;
    init.rho2 = 0.99;
    init.psi = -0.5;
    init.coupling = 3.0;
    integration_options opt;
    opt.dt = 0.01;
    opt.t_final = 100.0;
    for (auto _ : state) {
        trajectory traj =
            integrate_meanfield(meanfield_system::reduced_inter, p, law, init, opt);
        benchmark::DoNotOptimize(traj.r1.data());
    }
    state.SetItemsProcessed(state.iterations() * 10000); // steps per run
}
BENCHMARK(bm_integrate_reduced)->Unit(benchmark::kMillisecond);

void bm_scan_manifold(benchmark::State& state) {
    const system_params p = feedback_params();
    for (auto _ : state) {
        stability_report rep = scan_manifold(p, fast_system::inter, {},
                                             static_cast<std::size_t>(state.range(0)));
        benchmark::DoNotOptimize(rep.grid.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_scan_manifold)->Arg(1000)->Arg(4000);

void bm_fold_points(benchmark::State& state) {
    system_params p = feedback_params();
    p.coupling.k1 = 5.0;
    p.pop1.width = 0.1;
    p.pop2.center_freq = p.pop1.center_freq + 0.01; // tilted: bisection path
    for (auto _ : state) {
        fold_scan folds = fold_points(p, fast_system::inter);
        benchmark::DoNotOptimize(folds.rho1.data());
    }
}
BENCHMARK(bm_fold_points);

void bm_equilibrium(benchmark::State& state) {
    const system_params p = feedback_params();
    const adaptive_law_spec law = feedback_law();
    for (auto _ : state) {
        auto eqs = chimera_equilibrium(p, law, fast_system::inter, branch::plus);
        benchmark::DoNotOptimize(eqs.data());
    }
}
BENCHMARK(bm_equilibrium);

} // namespace

BENCHMARK_MAIN();
