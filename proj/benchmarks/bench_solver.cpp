#include <benchmark/benchmark.h>

#include <random>

#include "enetfp/enetfp.hpp"

using namespace enetfp;

namespace {

Dataset haar_data(std::size_t n) {
    std::mt19937_64 rng(1);
    Dataset data;
    data.inputs = uniform_inputs(n, 1, rng);
    data.outputs = Eigen::MatrixXd::Random(static_cast<Eigen::Index>(n), 1);
    return data;
}

void BM_Assemble(benchmark::State& state) {
    const int level = static_cast<int>(state.range(0));
    HaarDictionary haar({.max_level = level, .smoothness = 1.0, .weight_exponent = 0.0});
    const Dataset data = haar_data(1000);
    const auto ids = haar.enumerate();
    for (auto _ : state) benchmark::DoNotOptimize(assemble_empirical(haar, data, ids, 1));
    state.counters["features"] = static_cast<double>(ids.size());
}
BENCHMARK(BM_Assemble)->Arg(3)->Arg(5)->Arg(7);

void BM_Solve(benchmark::State& state) {
    HaarDictionary haar({.max_level = 6, .smoothness = 1.0, .weight_exponent = 0.0});
    const Dataset data = haar_data(1000);
    const auto ops = assemble_empirical(haar, data, haar.enumerate(), 1);
    SolverConfig cfg;
    cfg.epsilon = 1.0;
    cfg.lambda = 1.0 / static_cast<double>(state.range(0));
    cfg.kappa = HaarDictionary::series_kappa(1.0);
    cfg.target_accuracy = 1e-8;
    const auto weights = weights_of(haar);
    for (auto _ : state) benchmark::DoNotOptimize(solve(ops, cfg, weights));
}
BENCHMARK(BM_Solve)->Arg(10)->Arg(100)->Arg(1000);

void BM_Path(benchmark::State& state) {
    HaarDictionary haar({.max_level = 6, .smoothness = 1.0, .weight_exponent = 1.0});
    const Dataset data = haar_data(400);
    PathConfig pc;
    pc.solver.epsilon = 1.0;
    pc.solver.kappa = HaarDictionary::series_kappa(1.0);
    pc.warm_start = state.range(0) != 0;
    pc.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(regularization_path(haar, data, {0.01, 8}, pc));
}
BENCHMARK(BM_Path)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
