#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "probeforge/errors.hpp"
#include "probeforge/hierarchy.hpp"
#include "testutil.hpp"

using namespace probeforge;

namespace {

// Brute-force recount of instances reachable from the pragma target:
// one per call site (whole subtree per site) plus one per non-pipelined-nested
// loop.
struct InstanceCount {
    std::size_t functions = 0;
    std::size_t loops = 0;
    std::size_t total() const { return functions + loops; }
};

InstanceCount count_instances(const DesignManifest& m, const Body& body) {
    InstanceCount n;
    for (const auto& node : body) {
        if (const auto* call = std::get_if<Call>(&node.node)) {
            n.functions += 1;
            const InstanceCount sub = count_instances(m, m.functions.at(call->callee).body);
            n.functions += sub.functions;
            n.loops += sub.loops;
        } else if (const auto* loop = std::get_if<Loop>(&node.node)) {
            n.loops += 1;
            if (!loop->pipelined) {
                const InstanceCount sub = count_instances(m, loop->body);
                n.functions += sub.functions;
                n.loops += sub.loops;
            }
        } else if (const auto* par = std::get_if<Parallel>(&node.node)) {
            for (const auto& branch : par->branches) {
                const InstanceCount sub = count_instances(m, branch);
                n.functions += sub.functions;
                n.loops += sub.loops;
            }
        }
    }
    return n;
}

}  // namespace

TEST_CASE("toy hierarchy has four nodes at the documented depths") {
    const DesignManifest m = testutil::toy_manifest();
    const HierarchyTree tree = build_hierarchy(m);
    REQUIRE(tree.size() == 4);

    const HierNode& root = tree.node(tree.root);
    CHECK(root.source_path == "compute");
    CHECK(root.depth == 0);
    CHECK(root.rtl_name == "grp_compute_fu");
    CHECK(root.est_cycles == 80);

    const NodeId mult = locate(tree, "compute/mult");
    const NodeId sum = locate(tree, "compute/sum");
    const NodeId lw = locate(tree, "compute/sum/L_while");
    CHECK(tree.node(mult).depth == 1);
    CHECK(tree.node(sum).depth == 1);
    CHECK(tree.node(lw).depth == 2);
    CHECK(tree.node(lw).kind == HierKind::LoopInstance);
    CHECK(tree.node(lw).rtl_name == "sum_L_while");
    CHECK(tree.node(lw).est_cycles == 40);
}

TEST_CASE("pragma function with an empty body yields a single node") {
    DesignManifest m = testutil::base_manifest("solo");
    FunctionDef top;
    top.name = "main";
    top.pragma_realprobe = true;
    m.functions["main"] = top;
    m.top = "main";
    const HierarchyTree tree = build_hierarchy(m);
    CHECK(tree.size() == 1);
    CHECK(build_mapping(tree).entries.size() == 1);
}

TEST_CASE("no pragma raises NoPragma") {
    DesignManifest m = testutil::toy_manifest();
    m.functions.at("compute").pragma_realprobe = false;
    CHECK_THROWS_AS(build_hierarchy(m), Error);
    try {
        build_hierarchy(m);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NoPragma);
    }
}

TEST_CASE("repeated callees get per-call-site instances") {
    DesignManifest m = testutil::toy_manifest();
    // compute calls mult twice.
    m.functions.at("compute").body.insert(m.functions.at("compute").body.begin(),
                                          testutil::call_node("mult"));
    const HierarchyTree tree = build_hierarchy(m);
    CHECK(tree.size() == 5);
    const NodeId a = locate(tree, "compute/mult_1");
    const NodeId b = locate(tree, "compute/mult_2");
    CHECK(tree.node(a).rtl_name != tree.node(b).rtl_name);
    CHECK(tree.node(a).function_name == "mult");
    CHECK(tree.node(b).function_name == "mult");
    CHECK_THROWS_AS(locate(tree, "compute/mult"), Error);
}

TEST_CASE("mapping is a preorder bijection") {
    const HierarchyTree tree = build_hierarchy(testutil::toy_manifest());
    const MappingTable table = build_mapping(tree);
    REQUIRE(table.entries.size() == 4);
    CHECK(table.entries[0].source_path == "compute");
    CHECK(table.entries[3].source_path == "compute/sum/L_while");
    CHECK(table.entries[3].rtl_name == "sum_L_while");
    CHECK(table.entries[3].kind == HierKind::LoopInstance);

    for (const auto& row : table.entries) {
        CHECK(table.rtl_for(row.source_path) == row.rtl_name);
        CHECK(table.source_for(row.rtl_name) == row.source_path);
    }
}

TEST_CASE("mapping bijectivity and node counts hold on the random corpus") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        testutil::CorpusParams params;
        params.seed = seed;
        const DesignManifest m = testutil::random_manifest(params);
        const HierarchyTree tree = build_hierarchy(m);
        const MappingTable table = build_mapping(tree);

        CAPTURE(seed);
        CHECK(table.entries.size() == tree.size());
        std::set<std::string> paths, rtls;
        for (const auto& row : table.entries) {
            CHECK(paths.insert(row.source_path).second);
            CHECK(rtls.insert(row.rtl_name).second);
        }

        const std::string pragma = *m.pragma_function();
        const InstanceCount expected = count_instances(m, m.functions.at(pragma).body);
        CHECK(tree.size() == 1 + expected.total());

        // Per-call-site instancing: one function node per reachable call site
        // (plus the root), one loop node per reachable loop.
        InstanceCount actual;
        for (const HierNode& n : tree.nodes) {
            (n.kind == HierKind::FunctionInstance ? actual.functions : actual.loops) += 1;
        }
        CHECK(actual.functions == expected.functions + 1);
        CHECK(actual.loops == expected.loops);

        // Every node reachable from the root, depth == path length.
        CHECK(tree.preorder().size() == tree.size());
        for (const HierNode& n : tree.nodes) {
            std::size_t hops = 0;
            auto cur = n.parent;
            while (cur) {
                ++hops;
                cur = tree.node(*cur).parent;
            }
            CHECK(hops == n.depth);
        }
    }
}

TEST_CASE("inlined callees disappear from the mapping") {
    DesignManifest m = testutil::toy_manifest();
    m.functions.at("mult").inline_hint = InlineHint::Always;
    const DesignManifest inlined = apply_inlining(m, InliningPolicy::InlineDefault);
    const MappingTable table = build_mapping(build_hierarchy(inlined));
    CHECK(table.entries.size() == 3);
    CHECK_FALSE(table.rtl_for("compute/mult").has_value());
}

TEST_CASE("locate resolves exact paths and the root alias") {
    const HierarchyTree tree = build_hierarchy(testutil::toy_manifest());
    CHECK(locate(tree, "") == tree.root);
    CHECK(locate(tree, "compute") == tree.root);
    CHECK(tree.node(locate(tree, "compute/sum")).source_path == "compute/sum");
}

TEST_CASE("locate suggests the nearest sibling on a miss") {
    const HierarchyTree tree = build_hierarchy(testutil::toy_manifest());
    CHECK_THROWS_WITH_AS(locate(tree, "compute/typo"),
                         doctest::Contains("did you mean \"compute/sum\"?"), Error);
    CHECK_THROWS_WITH_AS(locate(tree, "compute/a"),
                         doctest::Contains("did you mean \"compute/mult\"?"), Error);
    CHECK_THROWS_WITH_AS(locate(tree, "elsewhere"), doctest::Contains("compute"), Error);
}

TEST_CASE("hierarchy knows loop execution metadata") {
    const std::string text = R"({
      "design": "pipe", "clock_mhz": 100.0,
      "platform": {"name": "p", "dram": {"fixed_latency_cycles": 10, "hw_latency_min": 10,
                   "hw_latency_mean": 12.0, "bandwidth_gbps": 1.0}},
      "budget": {"lut": 1000, "ff": 1000, "bram": 10},
      "top": "main",
      "functions": {"main": {"pragma_realprobe": true, "body": [
        {"kind": "loop", "name": "Lp", "trip_count": 32, "pipelined": true, "ii": 2,
         "body": [{"kind": "compute", "cycles": 5}]}
      ]}}
    })";
    const HierarchyTree tree = build_hierarchy(parse_manifest(text));
    const HierNode& loop = tree.node(locate(tree, "main/Lp"));
    CHECK(loop.pipelined);
    CHECK(loop.ii == 2);
    CHECK(loop.trip_count == 32);
    CHECK(loop.children.empty());  // pipelined bodies are flattened datapath
}
