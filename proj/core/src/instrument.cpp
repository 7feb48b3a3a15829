#include "probeforge/instrument.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "probeforge/errors.hpp"

namespace probeforge {

using nlohmann::json;

ProbePlan extract_signals(const HierarchyTree& tree, const std::vector<NodeId>& targets) {
    if (targets.empty()) {
        throw_error(Errc::UnknownNode, "probe target set is empty");
    }
    std::set<NodeId> wanted;
    for (NodeId id : targets) {
        if (id >= tree.nodes.size()) {
            throw_error(Errc::UnknownNode,
                        "probe target node " + std::to_string(id) + " is not in the tree");
        }
        wanted.insert(id);
    }

    ProbePlan plan;
    for (NodeId id : tree.preorder()) {
        if (!wanted.count(id)) continue;
        const HierNode& n = tree.node(id);
        Probe probe;
        probe.node = id;
        probe.start_signal = n.rtl_name + "_ap_start";
        probe.done_signal = n.rtl_name + "_ap_done";
        std::optional<NodeId> cur = n.parent;
        while (cur) {
            probe.route.push_back(*cur);
            cur = tree.node(*cur).parent;
        }
        plan.probes.push_back(std::move(probe));
    }
    return plan;
}

namespace {

// Expected activations of a node: product of the trip counts of every loop on
// its ancestor chain. nullopt when any of those trips is data dependent.
std::optional<std::uint64_t> expected_activations(const HierarchyTree& tree, NodeId id) {
    std::uint64_t product = 1;
    std::optional<NodeId> cur = tree.node(id).parent;
    while (cur) {
        const HierNode& n = tree.node(*cur);
        if (n.kind == HierKind::LoopInstance) {
            if (!n.trip_count) return std::nullopt;
            product *= *n.trip_count;
        }
        cur = n.parent;
    }
    return product;
}

}  // namespace

CounterAllocation allocate_counters(const ProbePlan& plan, const HierarchyTree& tree,
                                    const RollupResult& estimates, const AllocConfig& cfg) {
    CounterAllocation alloc;
    alloc.truncate_loop_iters = cfg.truncate_loop_iters;
    alloc.module_cap = cfg.module_cap;
    alloc.dump_ratio_pct = cfg.dump_ratio_pct;
    alloc.cap_exceeded = plan.probes.size() > cfg.module_cap;

    bool wide = false;
    for (const Probe& probe : plan.probes) {
        const HierNode& n = tree.node(probe.node);

        // Loop estimates were rolled into the tree at elaboration; function
        // instances defer to the caller-supplied rollup.
        std::optional<std::uint64_t> est = n.kind == HierKind::FunctionInstance
                                               ? estimates.at(n.function_name)
                                               : n.est_cycles;
        if (!est || *est >= (1ull << 32)) wide = true;

        ProbeAlloc pa;
        pa.node = probe.node;
        pa.is_loop = n.kind == HierKind::LoopInstance;

        auto activations = expected_activations(tree, probe.node);
        std::uint64_t depth;
        if (pa.is_loop) {
            // Per execution: 2 slots per recorded iteration plus the loop pair.
            std::uint64_t recorded = n.trip_count
                                         ? std::min<std::uint64_t>(*n.trip_count,
                                                                   cfg.truncate_loop_iters)
                                         : cfg.truncate_loop_iters;
            std::uint64_t per_execution = 2 * recorded + 2;
            depth = activations ? *activations * per_execution : cfg.max_depth;
        } else {
            depth = activations ? static_cast<std::uint64_t>(cfg.safety_factor) * *activations * 2
                                : cfg.max_depth;
        }
        depth = std::min<std::uint64_t>(depth, cfg.max_depth);
        depth = std::max<std::uint64_t>(depth, 2);
        pa.depth = static_cast<std::uint32_t>(depth);
        alloc.probes.push_back(pa);
    }
    alloc.counter_width = wide ? 64 : 32;
    return alloc;
}

const char* to_string(StorageTag tag) {
    return tag == StorageTag::Register ? "register" : "bram";
}

std::string probe_plan_to_json(const ProbePlan& plan, const HierarchyTree& tree) {
    json doc;
    json probes = json::array();
    for (const Probe& probe : plan.probes) {
        json route = json::array();
        for (NodeId id : probe.route) route.push_back(tree.node(id).source_path);
        probes.push_back({
            {"node", tree.node(probe.node).source_path},
            {"signal_pair", {probe.start_signal, probe.done_signal}},
            {"route", std::move(route)},
        });
    }
    doc["probes"] = std::move(probes);
    return doc.dump(2) + "\n";
}

std::string allocation_to_json(const CounterAllocation& alloc, const HierarchyTree& tree) {
    json doc;
    doc["counter_width"] = alloc.counter_width;
    doc["truncate_loop_iters"] = alloc.truncate_loop_iters;
    doc["module_cap"] = alloc.module_cap;
    doc["dump_ratio"] = alloc.dump_ratio_pct / 100.0;
    doc["cap_exceeded"] = alloc.cap_exceeded;
    json probes = json::array();
    for (std::size_t i = 0; i < alloc.probes.size(); ++i) {
        const ProbeAlloc& pa = alloc.probes[i];
        probes.push_back({
            {"node", tree.node(pa.node).source_path},
            {"depth", pa.depth},
            {"effective_depth", alloc.effective_depth(i)},
            {"storage", to_string(pa.storage)},
        });
    }
    doc["probes"] = std::move(probes);
    return doc.dump(2) + "\n";
}

}  // namespace probeforge
