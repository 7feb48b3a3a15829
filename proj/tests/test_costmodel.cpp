#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "probeforge/costmodel.hpp"
#include "probeforge/errors.hpp"
#include "testutil.hpp"

using namespace probeforge;

namespace {

CostConstants default_constants() {
    // (c_axi, c_pc, c_decode, c_l1, c_l2, c_f1, c_f2) = (400, 80, 16, 12, 3, 20, 8)
    return CostConstants{};
}

std::vector<ProbeShape> uniform(std::size_t n, std::uint32_t depth,
                                StorageTag tag = StorageTag::Register) {
    return std::vector<ProbeShape>(n, ProbeShape{depth, tag});
}

}  // namespace

TEST_CASE("estimate matches the worked register examples") {
    const CostConstants k = default_constants();
    CHECK(estimate_resources(uniform(10, 4), 32, k).lut == 784);
    CHECK(estimate_resources(uniform(1, 2), 32, k).lut == 498);  // log2(1) == 0

    CostConstants staged = k;
    staged.decode_variant = CostConstants::DecodeVariant::Staged;
    CHECK(estimate_resources(uniform(10, 4), 32, staged).lut == 752);
}

TEST_CASE("zero probes cost only the fixed logic") {
    const ResourceEstimate est = estimate_resources({}, 32, default_constants());
    CHECK(est.lut == 480);
    CHECK(est.ff == 480);
    CHECK(est.bram_blocks == 0);
}

TEST_CASE("bram-tagged probes trade register slots for 18-kbit blocks") {
    const CostConstants k = default_constants();
    const auto est = estimate_resources(uniform(4, 64, StorageTag::Bram), 64, k);
    // Fixed per-probe terms stay; no per-depth register terms.
    CHECK(est.lut == 400 + 80 + 16 * 2 + 4 * 12);
    CHECK(est.ff == 400 + 80 + 16 * 2 + 4 * 20);
    // 4 x 64 slots x 64 bits = 16384 bits -> 1 block.
    CHECK(est.bram_blocks == 1);
    CHECK(estimate_resources(uniform(5, 64, StorageTag::Bram), 64, k).bram_blocks == 2);
}

TEST_CASE("per-depth slope is exactly c_l2 and c_f2") {
    const CostConstants k = default_constants();
    for (std::uint32_t depth = 2; depth < 40; ++depth) {
        const auto a = estimate_resources(uniform(3, depth), 32, k);
        const auto b = estimate_resources(uniform(3, depth + 1), 32, k);
        CHECK(b.lut - a.lut == 3 * k.c_l2);
        CHECK(b.ff - a.ff == 3 * k.c_f2);
    }
}

TEST_CASE("monolithic decode steps only at powers of two") {
    const CostConstants k = default_constants();
    for (std::uint32_t bucket = 1; bucket <= 8; ++bucket) {
        const std::uint64_t lo = (1ull << (bucket - 1)) + 1;
        const std::uint64_t hi = 1ull << bucket;
        const auto at = [&](std::uint64_t n) {
            const auto est = estimate_resources(uniform(n, 2), 32, k);
            return est.lut - n * (k.c_l1 + 2 * k.c_l2);  // shared logic only
        };
        for (std::uint64_t n = lo; n <= hi; ++n) CHECK(at(n) == at(hi));
        if (hi > 2) CHECK(at(lo) == at(lo - 1) + k.c_decode);
    }
}

TEST_CASE("staged decode never beats monolithic upward, for N up to 1024") {
    CostConstants mono = default_constants();
    CostConstants staged = default_constants();
    staged.decode_variant = CostConstants::DecodeVariant::Staged;
    for (std::size_t n = 1; n <= 1024; ++n) {
        const auto m = estimate_resources(uniform(n, 4), 32, mono);
        const auto s = estimate_resources(uniform(n, 4), 32, staged);
        CHECK(s.lut <= m.lut);
        CHECK(s.ff <= m.ff);
    }
}

TEST_CASE("delta_r_util follows the weighted-ratio examples") {
    const ResourceBudget budget{53200, 106400, 140};
    CHECK(delta_r_util({784, 1200, 0}, {7840, 6000, 10}, budget) == doctest::Approx(0.1));
    CHECK(delta_r_util({0, 0, 0}, {7840, 6000, 10}, budget) == 0.0);

    // Zero-origin bram falls back to the board budget.
    const double v = delta_r_util({0, 0, 2}, {7840, 6000, 0}, budget);
    CHECK(v == doctest::Approx((2.0 / 140) / 3));
}

TEST_CASE("degenerate baselines are refused") {
    CHECK_THROWS_AS(delta_r_util({1, 1, 1}, {0, 0, 0}, {0, 0, 0}), Error);
    // Weight zero on the degenerate axis is fine.
    ResourceWeights w{0.5, 0.5, 0.0};
    CHECK(delta_r_util({10, 10, 1}, {100, 100, 0}, {0, 0, 0}, w) ==
          doctest::Approx(0.1));
}

TEST_CASE("baseline bandwidth: 512x64B over 1ms is 0.0328 GB/s") {
    DesignManifest m = testutil::base_manifest("bw");
    ExecutionTrace trace;
    trace.total_cycles = 100000;  // at 100 MHz -> 1 ms
    for (int i = 0; i < 512; ++i) trace.dram_events.push_back({0, 64});
    CHECK(baseline_bandwidth_gbps(m, trace) == doctest::Approx(0.032768));

    ExecutionTrace empty;
    empty.total_cycles = 100000;
    CHECK(baseline_bandwidth_gbps(m, empty) == 0.0);

    // The toy design moves no data at all.
    const DesignManifest toy = testutil::toy_manifest();
    const HierarchyTree tree = build_hierarchy(toy);
    CHECK(baseline_bandwidth_gbps(toy, run(toy, tree, SimMode::Cosim, 0)) == 0.0);
}

TEST_CASE("profiling bandwidth worked examples") {
    CHECK(profiling_bandwidth_gbps(32, 80, 1e-8) == doctest::Approx(0.04));
    CHECK(profiling_bandwidth_gbps(0, 80, 1e-8) == 0.0);
    // 512 B per dump x 100 dumps over one second = 51.2 KB/s.
    CHECK(profiling_bandwidth_gbps(512 * 100, 100000000, 1e-8) ==
          doctest::Approx(51200.0 / 1e9));
}

TEST_CASE("worst-case bandwidth reproduces the published constants") {
    // N=1, K=1, depth 64, 64-bit @ 100 MHz -> 0.78 GB/s (within 1%).
    const double extreme = worst_case_bandwidth_gbps(1, 1.0, 64, 64, 100e6);
    CHECK(extreme == doctest::Approx(0.78125));
    CHECK(std::abs(extreme - 0.78) / 0.78 < 0.01);

    // The printed formula gives 0.0078 for N=10, K=1000 (not the prose 0.0008).
    CHECK(worst_case_bandwidth_gbps(10, 1000.0, 64, 64, 100e6) ==
          doctest::Approx(0.0078125));

    // Bytes-per-second form: f*N*bits/(8K).
    CHECK(worst_case_bandwidth_bytes_per_sec(1, 1.0, 64, 100e6) == doctest::Approx(8e8));
    CHECK(worst_case_bandwidth_gbps(10, 1e9, 64, 64, 100e6) < 1e-8);  // K -> inf limit
}

TEST_CASE("worst-case formula bounds measured dump rates on the corpus") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        testutil::CorpusParams params;
        params.seed = 400 + seed;
        params.min_compute = 8;  // keep toggle gaps wide enough to avoid loss
        const testutil::ProfiledFixture fx =
            testutil::make_fixture(testutil::random_manifest(params), 75);
        const ProfiledRun pr = run_profiled(fx.m, fx.tree, fx.plan, fx.alloc, SimMode::Hw, seed);
        REQUIRE_FALSE(pr.log.lossy);
        if (pr.wall_cycles == 0 || pr.dram_traffic_bytes == 0) continue;

        // K = the tightest mean toggle gap across probes.
        double k_min = 1e18;
        for (const auto& probe_log : pr.log.probes) {
            if (probe_log.entries.empty()) continue;
            k_min = std::min(k_min, static_cast<double>(pr.wall_cycles) /
                                        static_cast<double>(probe_log.entries.size()));
        }
        const double f_hz = fx.m.clock_mhz * 1e6;
        const double measured =
            static_cast<double>(pr.dram_traffic_bytes) /
            (static_cast<double>(pr.wall_cycles) / f_hz);
        const double bound = worst_case_bandwidth_bytes_per_sec(
            pr.log.probes.size(), k_min, fx.alloc.counter_width, f_hz);
        CHECK(measured <= bound * (1.0 + 1e-9));
    }
}

TEST_CASE("fmax derates beyond the utilization threshold") {
    const ResourceBudget budget{1000, 1000, 100};
    CHECK(fmax_model({500, 100, 10}, budget, 100.0) == doctest::Approx(100.0));
    CHECK(fmax_model({900, 100, 10}, budget, 100.0) == doctest::Approx(90.0));
    CHECK(fmax_model({1000, 100, 10}, budget, 100.0) == doctest::Approx(85.0));
}

TEST_CASE("fmax is non-increasing in every component") {
    const ResourceBudget budget{1000, 2000, 50};
    double last = 1e9;
    for (std::uint64_t u = 0; u <= 1000; u += 50) {
        const double f = fmax_model({u, u, u / 25}, budget, 100.0);
        CHECK(f <= last + 1e-12);
        last = f;
    }
}

TEST_CASE("adapt keeps a fitting demand untouched") {
    const testutil::ProfiledFixture fx = testutil::make_fixture(testutil::toy_manifest());
    const CounterAllocation out = adapt_allocation(fx.alloc, fx.tree, fx.m.budget,
                                                   ResourceEstimate{}, default_constants());
    REQUIRE(out.probes.size() == fx.alloc.probes.size());
    for (std::size_t i = 0; i < out.probes.size(); ++i) {
        CHECK(out.probes[i].depth == fx.alloc.probes[i].depth);
        CHECK(out.probes[i].storage == StorageTag::Register);
    }
}

TEST_CASE("ff pressure retags the deepest queues to bram") {
    const testutil::ProfiledFixture fx = testutil::make_fixture(testutil::bench24_manifest());
    const CostConstants k = default_constants();

    const ResourceEstimate demand_est =
        estimate_resources(allocation_shapes(fx.alloc), fx.alloc.counter_width, k);
    ResourceBudget budget;
    budget.lut = demand_est.lut + 1000;
    budget.ff = demand_est.ff - 200;  // all-register does not fit
    budget.bram_blocks = 16;

    const CounterAllocation out =
        adapt_allocation(fx.alloc, fx.tree, budget, ResourceEstimate{}, k);
    const ResourceEstimate est = estimate_resources(allocation_shapes(out), out.counter_width, k);
    CHECK(est.ff <= budget.ff);
    CHECK(est.bram_blocks <= budget.bram_blocks);
    CHECK(out.probes.size() == fx.alloc.probes.size());  // retagging sufficed
    std::size_t brams = 0;
    for (const auto& p : out.probes) brams += p.storage == StorageTag::Bram;
    CHECK(brams > 0);
}

TEST_CASE("the 223-module stress case trims to the cap and fits") {
    const DesignManifest m = testutil::wide_manifest(223);
    const testutil::ProfiledFixture fx = testutil::make_fixture(m);
    REQUIRE(fx.alloc.probes.size() == 223);

    const CostConstants k = default_constants();
    const ResourceEstimate origin = origin_usage(m);
    ResourceBudget budget;
    budget.lut = origin.lut + 20000;
    budget.ff = origin.ff + 3300;  // room for roughly the capped 50 probes
    budget.bram_blocks = origin.bram_blocks;

    const CounterAllocation out = adapt_allocation(fx.alloc, fx.tree, budget, origin, k);
    CHECK(out.probes.size() <= 50);
    CHECK(out.probes.size() > 10);
    CHECK_FALSE(out.cap_exceeded);

    const ResourceEstimate est = estimate_resources(allocation_shapes(out), out.counter_width, k);
    CHECK(est.lut <= budget.lut - origin.lut);
    CHECK(est.ff <= budget.ff - origin.ff);

    // The pragma root survives adaptation.
    CHECK(std::any_of(out.probes.begin(), out.probes.end(),
                      [&](const ProbeAlloc& p) { return p.node == fx.tree.root; }));
}

TEST_CASE("adapt never exceeds the budget or raises a depth, across the corpus") {
    const CostConstants k = default_constants();
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        testutil::CorpusParams params;
        params.seed = 700 + seed;
        const DesignManifest m = testutil::random_manifest(params);
        const testutil::ProfiledFixture fx = testutil::make_fixture(m);
        const ResourceEstimate demand_est =
            estimate_resources(allocation_shapes(fx.alloc), fx.alloc.counter_width, k);

        // A budget that forces real work: roughly half the demand.
        ResourceBudget budget;
        budget.lut = 480 + demand_est.lut / 2;
        budget.ff = 480 + demand_est.ff / 2;
        budget.bram_blocks = 2;
        CAPTURE(seed);

        const CounterAllocation out =
            adapt_allocation(fx.alloc, fx.tree, budget, ResourceEstimate{}, k);
        const ResourceEstimate est =
            estimate_resources(allocation_shapes(out), out.counter_width, k);
        CHECK(est.lut <= budget.lut);
        CHECK(est.ff <= budget.ff);
        CHECK(est.bram_blocks <= budget.bram_blocks);

        for (const auto& p : out.probes) {
            const auto original =
                std::find_if(fx.alloc.probes.begin(), fx.alloc.probes.end(),
                             [&](const ProbeAlloc& d) { return d.node == p.node; });
            REQUIRE(original != fx.alloc.probes.end());
            CHECK(p.depth <= original->depth);
            CHECK(p.depth >= 2);
        }
    }
}

TEST_CASE("impossible budgets raise Unfittable") {
    const testutil::ProfiledFixture fx = testutil::make_fixture(testutil::toy_manifest());
    CHECK_THROWS_AS(adapt_allocation(fx.alloc, fx.tree, ResourceBudget{1, 1, 0},
                                     ResourceEstimate{}, default_constants()),
                    Error);
    try {
        adapt_allocation(fx.alloc, fx.tree, ResourceBudget{1, 1, 0}, ResourceEstimate{},
                         default_constants());
    } catch (const Error& e) {
        CHECK(e.code() == Errc::Unfittable);
        CHECK(e.exit_code() == 2);
    }
}

TEST_CASE("cost constants load from json with defaults") {
    const CostConstants k = CostConstants::from_json(R"({"c_axi": 100, "decode_variant": "staged"})");
    CHECK(k.c_axi == 100);
    CHECK(k.c_pc == 80);
    CHECK(k.decode_variant == CostConstants::DecodeVariant::Staged);
    const CostConstants round = CostConstants::from_json(k.to_json());
    CHECK(round.c_axi == 100);
    CHECK(round.decode_variant == CostConstants::DecodeVariant::Staged);
}

TEST_CASE("origin usage stand-in is deterministic and monotone in design size") {
    const DesignManifest small = testutil::toy_manifest();
    const DesignManifest large = testutil::bench24_manifest();
    const ResourceEstimate s = origin_usage(small);
    CHECK(origin_usage(small) == s);
    const ResourceEstimate l = origin_usage(large);
    CHECK(l.lut > s.lut);
    CHECK(l.ff > s.ff);
}
