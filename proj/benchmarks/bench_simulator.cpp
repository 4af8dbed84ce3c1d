#include <benchmark/benchmark.h>

#include "eoclab/activation.hpp"
#include "eoclab/simulator.hpp"

using namespace eoclab;

namespace {

SimConfig base_config(int width, int depth, int reps, unsigned threads) {
    SimConfig cfg;
    cfg.activation = make_activation("relu");
    cfg.params = {0.0, 2.0};
    cfg.widths.assign(depth, width);
    cfg.input_dim = 10;
    cfg.replications = reps;
    cfg.seed = 42;
    cfg.threads = threads;
    return cfg;
}

void BM_simulate(benchmark::State& state) {
    const SimConfig cfg = base_config(static_cast<int>(state.range(0)), 10, 10,
                                      static_cast<unsigned>(state.range(1)));
    const auto pair = make_input_pair(cfg.input_dim, 1.0, 0.3, cfg.params);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(cfg, {pair.first, pair.second}));
    }
}
BENCHMARK(BM_simulate)->Args({200, 1})->Args({200, 2})->Args({500, 2})
    ->Unit(benchmark::kMillisecond);

void BM_output_field(benchmark::State& state) {
    SimConfig cfg = base_config(100, 20, 1, 1);
    cfg.input_dim = 2;
    const FieldGrid grid{-3.0, 3.0, static_cast<int>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(output_field(cfg, grid));
    }
}
BENCHMARK(BM_output_field)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
