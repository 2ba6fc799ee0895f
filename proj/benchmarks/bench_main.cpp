// SPDX-License-Identifier: Apache-2.0

#include "vblast/alloc_apa.hpp"
#include "vblast/alloc_apra.hpp"
#include "vblast/alloc_ara.hpp"
#include "vblast/channel_model.hpp"
#include "vblast/outage.hpp"

#include <benchmark/benchmark.h>

using namespace vblast;

namespace {

SystemConfig square(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    return SystemConfig(m, m, db_to_linear(30.0));
}

void BM_SystemOutageExact(benchmark::State& state) {
    const auto cfg = square(state);
    const auto alloc = Allocation::uniform(cfg, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(system_outage_exact(cfg, alloc));
}
BENCHMARK(BM_SystemOutageExact)->Arg(2)->Arg(4)->Arg(8);

void BM_ApaClosedForm(benchmark::State& state) {
    const auto cfg = square(state);
    for (auto _ : state) benchmark::DoNotOptimize(apa_closed_form(cfg, 1.0));
}
BENCHMARK(BM_ApaClosedForm)->Arg(2)->Arg(4)->Arg(8);

void BM_ApaExact(benchmark::State& state) {
    const auto cfg = square(state);
    for (auto _ : state) benchmark::DoNotOptimize(apa_exact(cfg, 1.0));
}
BENCHMARK(BM_ApaExact)->Arg(2)->Arg(4)->Arg(8);

void BM_AraExact(benchmark::State& state) {
    const auto cfg = square(state);
    const double total = cfg.streams() * 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(ara_solve(cfg, total, Objective::exact));
}
BENCHMARK(BM_AraExact)->Arg(2)->Arg(4)->Arg(8);

void BM_ApraExact(benchmark::State& state) {
    const auto cfg = square(state);
    const double total = cfg.streams() * 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(apra_solve_exact(cfg, total));
}
BENCHMARK(BM_ApraExact)->Arg(2)->Arg(4);

void BM_MonteCarlo(benchmark::State& state) {
    const auto cfg = square(state);
    const auto alloc = Allocation::uniform(cfg, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_outage(cfg, alloc, 4096, 1, 1));
    state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK(BM_MonteCarlo)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
