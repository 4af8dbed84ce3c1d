#include <benchmark/benchmark.h>

#include "eoclab/activation.hpp"
#include "eoclab/eoc.hpp"
#include "eoclab/meanfield.hpp"

using namespace eoclab;

namespace {

const QuadratureConfig kCfg{};

void BM_variance_fixed_point(benchmark::State& state) {
    const Activation phi = make_activation("tanh");
    const MeanFieldParams p{1.0, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(variance_fixed_point(p, phi, 1e-8, kCfg));
    }
}
BENCHMARK(BM_variance_fixed_point)->Unit(benchmark::kMillisecond);

void BM_correlation_map(benchmark::State& state) {
    const Activation phi = make_activation("swish");
    const MeanFieldParams p{0.04, 2.94};
    for (auto _ : state) {
        benchmark::DoNotOptimize(correlation_map(0.5, 0.34, p, phi, kCfg));
    }
}
BENCHMARK(BM_correlation_map)->Unit(benchmark::kMicrosecond);

void BM_correlation_second_fd(benchmark::State& state) {
    const Activation phi = make_activation("hard_tanh");
    const MeanFieldParams p{0.0, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(correlation_map_second(0.5, 1.0, p, phi, kCfg));
    }
}
BENCHMARK(BM_correlation_second_fd)->Unit(benchmark::kMicrosecond);

void BM_eoc_solve_elu(benchmark::State& state) {
    const Activation phi = make_activation("elu");
    for (auto _ : state) {
        benchmark::DoNotOptimize(eoc_solve(0.2, phi, kCfg));
    }
}
BENCHMARK(BM_eoc_solve_elu)->Unit(benchmark::kMillisecond);

void BM_eoc_solve_swish(benchmark::State& state) {
    const Activation phi = make_activation("swish");
    for (auto _ : state) {
        benchmark::DoNotOptimize(eoc_solve(0.2, phi, kCfg));
    }
}
BENCHMARK(BM_eoc_solve_swish)->Unit(benchmark::kMillisecond);

}  // namespace
