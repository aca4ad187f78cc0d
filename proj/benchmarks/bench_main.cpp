#include "ncia/channel.hpp"
#include "ncia/config.hpp"
#include "ncia/harness.hpp"
#include "ncia/ia.hpp"
#include "ncia/numerics.hpp"

#include <benchmark/benchmark.h>

using namespace ncia;

namespace {

num::ComplexMatrix random_matrix(Rng& rng, std::size_t m, std::size_t n) {
    num::ComplexMatrix a(m, n);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            a(r, c) = channel::complex_gaussian(rng, 1.0);
        }
    }
    return a;
}

void BM_Svd(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(1);
    const auto a = random_matrix(rng, n, n);
    for (auto _ : state) {
        benchmark::DoNotOptimize(num::svd(a));
    }
}
BENCHMARK(BM_Svd)->Arg(4)->Arg(8)->Arg(16);

void BM_Schedule(benchmark::State& state) {
    const auto t = static_cast<std::size_t>(state.range(0));
    ia::SystemConfig cfg;
    cfg.subcarriers = 8;
    cfg.free_dims = 4;
    cfg.users = t / 4;
    Rng rng(2);
    std::vector<ia::Candidate> cands;
    for (std::size_t u = 0; u < cfg.users; ++u) {
        const auto g = random_matrix(rng, cfg.free_dims, cfg.usable_dims());
        const auto list = ia::ue_candidates(u, g);
        cands.insert(cands.end(), list.begin(), list.end());
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(ia::schedule(cands, cfg));
    }
}
BENCHMARK(BM_Schedule)->Arg(8)->Arg(16);

void BM_RunTrial(benchmark::State& state) {
    const ExperimentConfig cfg;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(harness::run_trial(cfg, seed++));
    }
}
BENCHMARK(BM_RunTrial);

} // namespace
BENCHMARK_MAIN();
