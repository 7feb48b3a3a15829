#pragma once
// RTL-style module hierarchy: one instance node per call site plus one node
// per loop, rooted at the pragma target. Also the bidirectional source-path
// <-> rtl-name mapping table.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "probeforge/manifest.hpp"

namespace probeforge {

using NodeId = std::uint32_t;

enum class HierKind { FunctionInstance, LoopInstance };

struct HierNode {
    NodeId id = 0;
    HierKind kind = HierKind::FunctionInstance;
    std::string rtl_name;     // unique tree-wide
    std::string source_path;  // unique tree-wide, e.g. "compute/sum/L_while"
    std::optional<NodeId> parent;
    std::vector<NodeId> children;  // in site-encounter order
    std::uint32_t depth = 0;
    std::optional<std::uint64_t> est_cycles;

    // Execution metadata consumed by the simulator.
    std::string function_name;  // instantiated function / owning function
    std::optional<std::uint64_t> trip_count;  // loops
    bool pipelined = false;
    std::uint64_t ii = 0;
};

struct HierarchyTree {
    std::vector<HierNode> nodes;  // id == index
    NodeId root = 0;

    const HierNode& node(NodeId id) const { return nodes.at(id); }
    std::size_t size() const { return nodes.size(); }

    /// Node ids in preorder (root first, children in site order).
    std::vector<NodeId> preorder() const;

    /// True when `ancestor` lies on `id`'s parent chain (or equals it).
    bool is_ancestor(NodeId ancestor, NodeId id) const;

    /// All node ids in the subtree rooted at `id`, preorder.
    std::vector<NodeId> subtree(NodeId id) const;
};

struct MappingRow {
    std::string source_path;
    std::string rtl_name;
    HierKind kind;

    bool operator==(const MappingRow&) const = default;
};

struct MappingTable {
    std::vector<MappingRow> entries;  // preorder

    std::optional<std::string> rtl_for(const std::string& source_path) const;
    std::optional<std::string> source_for(const std::string& rtl_name) const;
};

/// Elaborate the manifest below the pragma target. A function called from two
/// sites yields two instances (suffixed _1, _2). Throws Error{NoPragma} when
/// no function carries the pragma.
HierarchyTree build_hierarchy(const DesignManifest& m);

MappingTable build_mapping(const HierarchyTree& tree);

/// Exact source-path lookup; "" is an alias for the root. Throws
/// Error{NotFound} carrying a nearest-neighbor suggestion.
NodeId locate(const HierarchyTree& tree, const std::string& source_path);

/// Visits the call/loop sites of a body in flattened preorder (parallel
/// branches in order, loop bodies not entered). Site order defines the child
/// order of hierarchy nodes and must match between elaboration and execution.
void for_each_site(const Body& body, const std::function<void(const BodyNode&)>& visit);

std::size_t count_sites(const Body& body);

/// Artifact serializations.
std::string hierarchy_to_json(const HierarchyTree& tree);
std::string mapping_to_json(const MappingTable& table);

const char* to_string(HierKind k);

}  // namespace probeforge
