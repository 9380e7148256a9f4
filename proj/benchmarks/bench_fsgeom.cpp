#include "krflow/fsgeom.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_PullbackNorm(benchmark::State& state) {
    const int r = static_cast<int>(state.range(0));
    krflow::fsgeom::LinearMap a(krflow::fsgeom::random_invertible(r, 42));
    const auto x = krflow::fsgeom::random_point(r, 7);
    const auto xi = krflow::fsgeom::random_tangent(r, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(krflow::fsgeom::pullback_norm(a, x, xi));
    }
}
BENCHMARK(BM_PullbackNorm)->Arg(2)->Arg(5);

void BM_VerifyLemma(benchmark::State& state) {
    krflow::fsgeom::LinearMap a(krflow::fsgeom::random_invertible(3, 42));
    for (auto _ : state) {
        benchmark::DoNotOptimize(krflow::fsgeom::verify_lemma(a, 100, 11));
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_VerifyLemma);

} // namespace
