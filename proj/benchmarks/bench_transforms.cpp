#include <benchmark/benchmark.h>

#include <nrcdt/nrcdt.hpp>

namespace {

using namespace nrcdt;

const DiscreteMeasure2D& shield() {
    static const DiscreteMeasure2D m = make_template(TemplateKind::shield, 64);
    return m;
}

void BM_Slice(benchmark::State& state) {
    const auto d = Direction::from_angle(0.3);
    for (auto _ : state) benchmark::DoNotOptimize(slice(shield(), d));
}
BENCHMARK(BM_Slice);

void BM_Rcdt(benchmark::State& state) {
    const AngleGrid ag(static_cast<std::size_t>(state.range(0)));
    const QuantileGrid g(64);
    for (auto _ : state) benchmark::DoNotOptimize(rcdt(shield(), ag, g));
}
BENCHMARK(BM_Rcdt)->Arg(8)->Arg(32)->Arg(128);

void BM_Mnrcdt(benchmark::State& state) {
    const AngleGrid ag(static_cast<std::size_t>(state.range(0)));
    const QuantileGrid g(64);
    for (auto _ : state) benchmark::DoNotOptimize(mnrcdt(shield(), ag, g));
}
BENCHMARK(BM_Mnrcdt)->Arg(8)->Arg(32)->Arg(128);

void BM_W2(benchmark::State& state) {
    const QuantileGrid g(static_cast<std::size_t>(state.range(0)));
    const auto a = cdt(slice(shield(), Direction::from_angle(0.1)), g);
    const auto b = cdt(slice(shield(), Direction::from_angle(1.2)), g);
    for (auto _ : state) benchmark::DoNotOptimize(wasserstein2(a, b));
}
BENCHMARK(BM_W2)->Arg(64)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
