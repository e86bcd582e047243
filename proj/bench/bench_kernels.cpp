#include <benchmark/benchmark.h>

#include "ifatune/bandplan.hpp"
#include "ifatune/config.hpp"

using namespace ifatune;

namespace {

const run_config& shipped() {
    static const run_config cfg = load_config(IFATUNE_DATA_DIR "/default.conf");
    return cfg;
}

template <auto Kernel>
void bm_sweep(benchmark::State& state) {
    const auto& cfg = shipped();
    const auto net = cfg.resonator_at(0.0);
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(Kernel(cfg.geometry, net, cfg.sweep.f_start, cfg.sweep.f_stop, n, cfg.sweep.z_ref));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void bm_tuning(benchmark::State& state) {
    const auto& cfg = shipped();
    const auto plan = bandplan::builtin_bandplan();
    for (auto _ : state) {
        benchmark::DoNotOptimize(Kernel(cfg.geometry, cfg.resonator, cfg.varactor, cfg.voltages, cfg.sweep, plan));
    }
}

}  // namespace

BENCHMARK(bm_sweep<antmodel::sweep_serial>)->Name("sweep_serial")->Arg(2001)->Arg(100001);
BENCHMARK(bm_sweep<antmodel::sweep>)->Name("sweep_omp")->Arg(2001)->Arg(100001)->UseRealTime();
BENCHMARK(bm_tuning<bandplan::tuning_sweep_serial>)->Name("tuning_sweep_serial");
BENCHMARK(bm_tuning<bandplan::tuning_sweep>)->Name("tuning_sweep_omp")->UseRealTime();

BENCHMARK_MAIN();
