#include "krflow/flow.hpp"
#include "krflow/scenario.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_FlowRhs(benchmark::State& state) {
    auto s = krflow::scenario::preset("hirzebruch1");
    s.grid_n = static_cast<int>(state.range(0));
    krflow::scenario::validate(s);
    auto problem = krflow::scenario::make_problem(s);
    auto st = problem.initial_state();
    for (auto _ : state) {
        benchmark::DoNotOptimize(problem.rhs(st));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FlowRhs)->Arg(256)->Arg(1024)->Arg(4096);

void BM_FlowStep(benchmark::State& state) {
    auto s = krflow::scenario::preset("hirzebruch1");
    s.grid_n = static_cast<int>(state.range(0));
    krflow::scenario::validate(s);
    auto problem = krflow::scenario::make_problem(s);
    auto st = problem.initial_state();
    const double dt = 1e-7;
    for (auto _ : state) {
        st = problem.step(st, dt);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FlowStep)->Arg(256)->Arg(1024);

} // namespace
