#pragma once
// Probe planning: choose which control-signal pairs get externalized, the
// route each one takes to the top, and how many timestamp slots every
// performance counter receives.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "probeforge/hierarchy.hpp"

namespace probeforge {

struct Probe {
    NodeId node = 0;
    std::string start_signal;       // "<rtl>_ap_start"
    std::string done_signal;        // "<rtl>_ap_done"
    std::vector<NodeId> route;      // ancestors, nearest first, ending at root
};

struct ProbePlan {
    std::vector<Probe> probes;  // preorder of the targeted nodes

    std::optional<std::size_t> index_of(NodeId node) const {
        for (std::size_t i = 0; i < probes.size(); ++i) {
            if (probes[i].node == node) return i;
        }
        return std::nullopt;
    }
};

/// One probe per target, route = path to the tree root. Pass tree.preorder()
/// (or an explicit subset) as targets. Throws Error{UnknownNode} for ids
/// outside the tree.
ProbePlan extract_signals(const HierarchyTree& tree, const std::vector<NodeId>& targets);

enum class StorageTag { Register, Bram };

struct AllocConfig {
    std::uint32_t truncate_loop_iters = 4;  // per-iteration records kept per loop
    std::uint32_t module_cap = 50;          // N_max
    std::uint32_t safety_factor = 2;        // projected-requirement multiplier
    std::uint32_t max_depth = 4096;         // clamp, also the unknown-estimate depth
    std::uint32_t dump_ratio_pct = 0;       // 0, 25, 50 or 75
};

struct ProbeAlloc {
    NodeId node = 0;
    std::uint32_t depth = 2;  // allocated timestamp slots, >= 2
    StorageTag storage = StorageTag::Register;
    bool is_loop = false;
};

struct CounterAllocation {
    std::vector<ProbeAlloc> probes;
    std::uint32_t counter_width = 32;  // 32 or 64
    std::uint32_t truncate_loop_iters = 4;
    std::uint32_t module_cap = 50;
    std::uint32_t dump_ratio_pct = 0;
    bool cap_exceeded = false;  // more probes than module_cap; adapt trims

    /// On-chip slots once the dump ratio streams the remainder to DRAM:
    /// ceil((1 - r) * depth).
    std::uint32_t effective_depth(std::size_t i) const {
        const std::uint64_t keep = 100 - dump_ratio_pct;
        return static_cast<std::uint32_t>((static_cast<std::uint64_t>(probes[i].depth) * keep + 99) / 100);
    }

    bool dumps_enabled() const { return dump_ratio_pct > 0; }
};

/// Sizes every performance counter. Non-loop probes get safety_factor x
/// expected activations x 2 slots (activations = product of enclosing loop
/// trip counts, 1 at the root). Loop probes get executions x
/// (2*min(trip, truncate) + 2). Unknown trip counts anywhere force max_depth;
/// estimates >= 2^32 (or unknown) force a 64-bit counter.
CounterAllocation allocate_counters(const ProbePlan& plan, const HierarchyTree& tree,
                                    const RollupResult& estimates, const AllocConfig& cfg);

const char* to_string(StorageTag tag);

/// JSON (de)serialization for the probe_plan.json / allocation.json artifacts.
std::string probe_plan_to_json(const ProbePlan& plan, const HierarchyTree& tree);
std::string allocation_to_json(const CounterAllocation& alloc, const HierarchyTree& tree);

}  // namespace probeforge
