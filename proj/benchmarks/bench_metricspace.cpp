#include "krflow/metricspace.hpp"
#include "krflow/scenario.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_BuildSpace(benchmark::State& state) {
    auto s = krflow::scenario::preset("hirzebruch1");
    s.grid_n = 256;
    krflow::scenario::validate(s);
    auto problem = krflow::scenario::make_problem(s);
    krflow::flow::RunConfig config;
    config.t_end = 0.5 * s.T;
    config.record_times = {0.5 * s.T};
    const auto run = problem.run(config);
    krflow::metricspace::SpaceOptions opts;
    opts.resolution = static_cast<int>(state.range(0));
    const krflow::geometry::BundleGeometry geom(s.k);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            krflow::metricspace::build_space(run.snapshots.back(), geom, opts));
    }
}
BENCHMARK(BM_BuildSpace)->Arg(8)->Arg(15)->Unit(benchmark::kMillisecond);

} // namespace
