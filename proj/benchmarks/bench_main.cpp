#include <benchmark/benchmark.h>

#include <random>

#include "probeforge/costmodel.hpp"
#include "probeforge/dse.hpp"
#include "probeforge/simkernel.hpp"
#include "probeforge/workspace.hpp"
#include "testutil.hpp"

namespace pf = probeforge;

namespace {

static void BM_SimulateCorpusManifest(benchmark::State& state) {
    testutil::CorpusParams params;
    params.seed = static_cast<std::uint64_t>(state.range(0));
    const pf::DesignManifest m = testutil::random_manifest(params);
    const pf::HierarchyTree tree = pf::build_hierarchy(m);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pf::run(m, tree, pf::SimMode::Hw, seed++).total_cycles);
    }
}
BENCHMARK(BM_SimulateCorpusManifest)->Arg(3)->Arg(7);

static void BM_ProfiledRun(benchmark::State& state) {
    testutil::CorpusParams params;
    params.seed = 5;
    const testutil::ProfiledFixture fx =
        testutil::make_fixture(testutil::random_manifest(params));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            pf::run_profiled(fx.m, fx.tree, fx.plan, fx.alloc, pf::SimMode::Hw, seed++)
                .wall_cycles);
    }
}
BENCHMARK(BM_ProfiledRun);

static void BM_ParetoFrontier(benchmark::State& state) {
    std::mt19937_64 rng(17);
    std::vector<pf::DsePoint> points;
    for (std::int64_t i = 0; i < state.range(0); ++i) {
        pf::DsePoint p;
        p.config_id = "p" + std::to_string(i);
        p.r_util = static_cast<double>(rng() % 1000) / 1000.0;
        p.b_dram = static_cast<double>(rng() % 1000) / 1000.0;
        p.f_max = static_cast<double>(50 + rng() % 100);
        points.push_back(p);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(pf::pareto_frontier(points).size());
    }
}
BENCHMARK(BM_ParetoFrontier)->Arg(64)->Arg(512);

static void BM_EstimateResources(benchmark::State& state) {
    const std::vector<pf::ProbeShape> shapes(
        static_cast<std::size_t>(state.range(0)),
        pf::ProbeShape{8, pf::StorageTag::Register});
    const pf::CostConstants k;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pf::estimate_resources(shapes, 64, k).lut);
    }
}
BENCHMARK(BM_EstimateResources)->Arg(50)->Arg(223);

static void BM_Sha256_1MiB(benchmark::State& state) {
    const std::string payload(1 << 20, 'x');
    for (auto _ : state) {
        benchmark::DoNotOptimize(pf::sha256_hex(payload));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * (1 << 20));
}
BENCHMARK(BM_Sha256_1MiB);

}  // namespace

BENCHMARK_MAIN();
