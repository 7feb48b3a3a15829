#include "probeforge/hierarchy.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"
#include "probeforge/errors.hpp"

namespace probeforge {

namespace {

std::string mangle(const std::string& path) {
    std::string out = path;
    std::replace(out.begin(), out.end(), '/', '_');
    return out;
}

struct TreeBuilder {
    const DesignManifest& m;
    const RollupResult rollup;
    HierarchyTree tree;
    std::map<std::string, std::uint32_t> rtl_counts;
    std::map<std::string, std::uint32_t> path_counts;

    // Uniqueness is the rtl_name contract; reused functions would otherwise
    // repeat their loops' names under every instance.
    std::string unique_rtl(std::string name) {
        const std::uint32_t n = ++rtl_counts[name];
        return n == 1 ? name : name + "_" + std::to_string(n);
    }

    NodeId make_node(HierKind kind, std::optional<NodeId> parent, std::string component) {
        HierNode node;
        node.id = static_cast<NodeId>(tree.nodes.size());
        node.kind = kind;
        node.parent = parent;
        std::string path =
            parent ? tree.nodes[*parent].source_path + "/" + component : component;
        const std::uint32_t seen = ++path_counts[path];
        if (seen > 1) path += "_" + std::to_string(seen);  // literal-name collision guard
        node.source_path = std::move(path);
        if (parent) {
            node.depth = tree.nodes[*parent].depth + 1;
            tree.nodes[*parent].children.push_back(node.id);
        }
        tree.nodes.push_back(std::move(node));
        return tree.nodes.back().id;
    }

    // Expands the sites of `body` as children of `context`. `fn_component` is
    // the enclosing function instance's path component (suffix included) and
    // `loop_chain` the loop names from that function down to this body.
    void expand_body(NodeId context, const std::string& fn_name,
                     const std::string& fn_component, std::vector<std::string> loop_chain,
                     const Body& body) {
        // Callees appearing more than once under this context get _1.._n.
        std::map<std::string, std::uint64_t> totals;
        for_each_site(body, [&](const BodyNode& site) {
            if (const auto* call = std::get_if<Call>(&site.node)) ++totals[call->callee];
        });
        std::map<std::string, std::uint64_t> seen;

        for_each_site(body, [&](const BodyNode& site) {
            if (const auto* call = std::get_if<Call>(&site.node)) {
                std::string component = call->callee;
                if (totals[call->callee] > 1) {
                    component += "_" + std::to_string(++seen[call->callee]);
                }
                NodeId child = make_node(HierKind::FunctionInstance, context, component);
                HierNode& cn = tree.nodes[child];
                cn.function_name = call->callee;
                cn.est_cycles = rollup.at(call->callee);
                cn.rtl_name = unique_rtl("grp_" + mangle(cn.source_path) + "_fu");
                expand_body(child, call->callee, component, {},
                            m.functions.at(call->callee).body);
            } else if (const auto* loop = std::get_if<Loop>(&site.node)) {
                NodeId child = make_node(HierKind::LoopInstance, context, loop->name);
                HierNode& cn = tree.nodes[child];
                cn.function_name = fn_name;
                cn.trip_count = loop->trip_count;
                cn.pipelined = loop->pipelined;
                cn.ii = loop->ii;

                std::vector<std::string> chain = loop_chain;
                chain.push_back(loop->name);
                std::string rollup_key = fn_name;
                for (const auto& seg : chain) rollup_key += "/" + seg;
                cn.est_cycles = rollup.at(rollup_key);

                std::string rtl = fn_component;
                for (const auto& seg : chain) rtl += "_" + seg;
                cn.rtl_name = unique_rtl(rtl);

                if (!loop->pipelined) {
                    expand_body(child, fn_name, fn_component, chain, loop->body);
                }
            }
        });
    }
};

}  // namespace

void for_each_site(const Body& body, const std::function<void(const BodyNode&)>& visit) {
    for (const auto& n : body) {
        if (std::holds_alternative<Call>(n.node) || std::holds_alternative<Loop>(n.node)) {
            visit(n);
        } else if (const auto* par = std::get_if<Parallel>(&n.node)) {
            for (const auto& branch : par->branches) for_each_site(branch, visit);
        }
    }
}

std::size_t count_sites(const Body& body) {
    std::size_t count = 0;
    for_each_site(body, [&](const BodyNode&) { ++count; });
    return count;
}

std::vector<NodeId> HierarchyTree::preorder() const {
    std::vector<NodeId> order;
    order.reserve(nodes.size());
    std::function<void(NodeId)> visit = [&](NodeId id) {
        order.push_back(id);
        for (NodeId child : nodes[id].children) visit(child);
    };
    if (!nodes.empty()) visit(root);
    return order;
}

bool HierarchyTree::is_ancestor(NodeId ancestor, NodeId id) const {
    std::optional<NodeId> cur = id;
    while (cur) {
        if (*cur == ancestor) return true;
        cur = nodes[*cur].parent;
    }
    return false;
}

std::vector<NodeId> HierarchyTree::subtree(NodeId id) const {
    std::vector<NodeId> out;
    std::function<void(NodeId)> visit = [&](NodeId n) {
        out.push_back(n);
        for (NodeId child : nodes[n].children) visit(child);
    };
    visit(id);
    return out;
}

HierarchyTree build_hierarchy(const DesignManifest& m) {
    auto pragma = m.pragma_function();
    if (!pragma) {
        throw_error(Errc::NoPragma, "no function carries pragma_realprobe; nothing to profile");
    }

    TreeBuilder builder{m, static_latency_rollup(m), {}, {}, {}};
    NodeId root = builder.make_node(HierKind::FunctionInstance, std::nullopt, *pragma);
    HierNode& rn = builder.tree.nodes[root];
    rn.function_name = *pragma;
    rn.est_cycles = builder.rollup.at(*pragma);
    rn.rtl_name = builder.unique_rtl("grp_" + mangle(*pragma) + "_fu");
    builder.tree.root = root;
    builder.expand_body(root, *pragma, *pragma, {}, m.functions.at(*pragma).body);
    return std::move(builder.tree);
}

MappingTable build_mapping(const HierarchyTree& tree) {
    MappingTable table;
    for (NodeId id : tree.preorder()) {
        const HierNode& n = tree.node(id);
        table.entries.push_back({n.source_path, n.rtl_name, n.kind});
    }
    return table;
}

std::optional<std::string> MappingTable::rtl_for(const std::string& source_path) const {
    for (const auto& row : entries) {
        if (row.source_path == source_path) return row.rtl_name;
    }
    return std::nullopt;
}

std::optional<std::string> MappingTable::source_for(const std::string& rtl_name) const {
    for (const auto& row : entries) {
        if (row.rtl_name == rtl_name) return row.source_path;
    }
    return std::nullopt;
}

NodeId locate(const HierarchyTree& tree, const std::string& source_path) {
    if (source_path.empty()) return tree.root;

    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= source_path.size()) {
        std::size_t slash = source_path.find('/', start);
        if (slash == std::string::npos) slash = source_path.size();
        parts.push_back(source_path.substr(start, slash - start));
        start = slash + 1;
    }

    auto component_of = [&](NodeId id) {
        const std::string& p = tree.node(id).source_path;
        std::size_t slash = p.rfind('/');
        return slash == std::string::npos ? p : p.substr(slash + 1);
    };

    NodeId current = tree.root;
    if (parts[0] != component_of(tree.root)) {
        throw_error(Errc::NotFound, "source path \"" + source_path +
                                        "\" not found; did you mean \"" +
                                        tree.node(tree.root).source_path + "\"?");
    }
    for (std::size_t i = 1; i < parts.size(); ++i) {
        std::optional<NodeId> next;
        for (NodeId child : tree.node(current).children) {
            if (component_of(child) == parts[i]) {
                next = child;
                break;
            }
        }
        if (!next) {
            // Nearest alphabetical neighbor among the matched node's children.
            std::vector<std::string> names;
            for (NodeId child : tree.node(current).children) names.push_back(component_of(child));
            std::sort(names.begin(), names.end());
            std::string suggestion = tree.node(current).source_path;
            if (!names.empty()) {
                auto it = std::lower_bound(names.begin(), names.end(), parts[i]);
                const std::string& pick = it == names.begin() ? *it : *std::prev(it);
                suggestion += "/" + pick;
            }
            throw_error(Errc::NotFound, "source path \"" + source_path +
                                            "\" not found; did you mean \"" + suggestion +
                                            "\"?");
        }
        current = *next;
    }
    return current;
}

std::string hierarchy_to_json(const HierarchyTree& tree) {
    nlohmann::json doc;
    doc["root"] = tree.root;
    nlohmann::json nodes = nlohmann::json::array();
    for (const HierNode& n : tree.nodes) {
        nlohmann::json nj;
        nj["id"] = n.id;
        nj["kind"] = to_string(n.kind);
        nj["rtl_name"] = n.rtl_name;
        nj["source_path"] = n.source_path;
        if (n.parent) nj["parent"] = *n.parent;
        nj["children"] = n.children;
        nj["depth"] = n.depth;
        if (n.est_cycles) nj["est_cycles"] = *n.est_cycles;
        nj["function"] = n.function_name;
        if (n.kind == HierKind::LoopInstance) {
            if (n.trip_count) nj["trip_count"] = *n.trip_count;
            nj["pipelined"] = n.pipelined;
            if (n.pipelined) nj["ii"] = n.ii;
        }
        nodes.push_back(std::move(nj));
    }
    doc["nodes"] = std::move(nodes);
    return doc.dump(2) + "\n";
}

std::string mapping_to_json(const MappingTable& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const MappingRow& row : table.entries) {
        rows.push_back({{"source_path", row.source_path},
                        {"rtl_name", row.rtl_name},
                        {"kind", to_string(row.kind)}});
    }
    nlohmann::json doc;
    doc["entries"] = std::move(rows);
    return doc.dump(2) + "\n";
}

const char* to_string(HierKind k) {
    return k == HierKind::FunctionInstance ? "function_instance" : "loop_instance";
}

}  // namespace probeforge
