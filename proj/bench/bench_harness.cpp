#include <benchmark/benchmark.h>

#include "dkaf/harness.hpp"

namespace {

dkaf::ExperimentConfig bench_config(std::size_t nodes) {
    dkaf::ExperimentConfig c;
    c.stream.task = dkaf::Task::Crescent;
    c.stream.node_count = nodes;
    c.stream.rounds = 500;
    c.stream.noise_std = 0.3;
    c.hyper.eta = 0.1;
    c.hyper.epsilon = 0.2;
    c.hyper.zeta = 0.96;
    c.hyper.budget = 40;
    c.kernel.sigma = 0.3;
    c.algorithms = {dkaf::Algorithm::QDKLMS, dkaf::Algorithm::FBQDKLMS};
    c.monte_carlo_runs = 16;
    return c;
}

void BM_RunExperimentSerial(benchmark::State& state) {
    const auto c = bench_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dkaf::run_experiment(c, dkaf::Execution::Serial));
    }
}

void BM_RunExperimentParallel(benchmark::State& state) {
    const auto c = bench_config(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dkaf::run_experiment(c, dkaf::Execution::Parallel));
    }
}

}  // namespace

BENCHMARK(BM_RunExperimentSerial)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunExperimentParallel)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
