#include <benchmark/benchmark.h>

#include "sisopt/equilibrium.hpp"
#include "sisopt/model.hpp"
#include "sisopt/pareto.hpp"
#include "sisopt/rng.hpp"
#include "sisopt/spectral.hpp"

namespace {

// dense random contact structure, symmetric, n sites of equal mass
sisopt::SisModel random_dense_model(std::size_t n, std::uint64_t seed) {
    sisopt::Rng rng(seed);
    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    std::vector<std::vector<double>> kernel(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            kernel[i][j] = kernel[j][i] = 0.5 + 3.0 * rng.uniform();
    std::vector<double> gamma(n, 1.0);
    return sisopt::build_block_model(weights, kernel, gamma);
}

void BM_SpectralRadius(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    sisopt::SisModel model = random_dense_model(n, 42);
    sisopt::Strategy eta = sisopt::Strategy::constant(n, 0.7);
    for (auto _ : state) {
        double rho = sisopt::effective_R(model, eta);
        benchmark::DoNotOptimize(rho);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SpectralRadius)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

void BM_PerronPair(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    sisopt::SisModel model = random_dense_model(n, 42);
    sisopt::Strategy eta = sisopt::Strategy::constant(n, 0.7);
    for (auto _ : state) {
        auto triple = sisopt::perron_triple(model.next_gen, eta);
        benchmark::DoNotOptimize(triple.rho);
    }
}
BENCHMARK(BM_PerronPair)->RangeMultiplier(4)->Range(16, 256);

void BM_MaximalEquilibrium(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    sisopt::SisModel model = random_dense_model(n, 7);
    sisopt::Strategy eta = sisopt::Strategy::constant(n, 0.9);
    sisopt::EquilibriumOptions opts;
    opts.certify = false;
    for (auto _ : state) {
        auto eq = sisopt::solve_equilibrium(model, eta, opts);
        benchmark::DoNotOptimize(eq.infected_fraction);
    }
}
BENCHMARK(BM_MaximalEquilibrium)->RangeMultiplier(4)->Range(16, 256);

void BM_FrontierPoint(benchmark::State& state) {
    sisopt::SisModel model =
        sisopt::build_block_model({0.5, 0.5}, {{1.0, 2.0}, {2.0, 1.0}}, {1.0, 1.0});
    sisopt::CostFunction cost = sisopt::CostFunction::uniform();
    for (auto _ : state) {
        auto pt = sisopt::minimize_loss_at_cost(model, sisopt::LossKind::Re, cost, 0.25);
        benchmark::DoNotOptimize(pt.loss);
    }
}
BENCHMARK(BM_FrontierPoint);

} // namespace

BENCHMARK_MAIN();
