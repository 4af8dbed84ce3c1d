#include <benchmark/benchmark.h>

#include "eoclab/activation.hpp"
#include "eoclab/quadrature.hpp"

using namespace eoclab;

namespace {

void BM_expect1_smooth(benchmark::State& state) {
    const Activation phi = make_activation("swish");
    const QuadratureConfig cfg{static_cast<int>(state.range(0)), true};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            expect1([&](double t) { return phi.value(t) * phi.value(t); }, 0.8, cfg, phi.kinks));
    }
}
BENCHMARK(BM_expect1_smooth)->Arg(64)->Arg(200)->Arg(400);

void BM_expect1_kinked(benchmark::State& state) {
    const Activation phi = make_activation("hard_tanh");
    const QuadratureConfig cfg{static_cast<int>(state.range(0)), true};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            expect1([&](double t) { return phi.value(t) * phi.value(t); }, 0.8, cfg, phi.kinks));
    }
}
BENCHMARK(BM_expect1_kinked)->Arg(200);

void BM_expect2_smooth(benchmark::State& state) {
    const Activation phi = make_activation("tanh");
    const QuadratureConfig cfg{static_cast<int>(state.range(0)), true};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            expect2(phi.value, phi.value, 1.0, 1.0, 0.5, cfg, phi.kinks, phi.kinks));
    }
}
BENCHMARK(BM_expect2_smooth)->Arg(64)->Arg(200)->Unit(benchmark::kMicrosecond);

void BM_expect2_kinked(benchmark::State& state) {
    const Activation phi = make_activation("relu");
    const QuadratureConfig cfg{200, true};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            expect2(phi.value, phi.value, 1.0, 1.0, 0.5, cfg, phi.kinks, phi.kinks));
    }
}
BENCHMARK(BM_expect2_kinked)->Unit(benchmark::kMicrosecond);

void BM_mc_expect2(benchmark::State& state) {
    const Activation phi = make_activation("tanh");
    const McConfig mc{static_cast<std::int64_t>(state.range(0)), 7};
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc_expect2(phi.value, phi.value, 1.0, 1.0, 0.5, mc));
    }
}
BENCHMARK(BM_mc_expect2)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
