#include "probeforge/manifest.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "probeforge/errors.hpp"

namespace probeforge {

using nlohmann::json;

namespace {

struct LineCol {
    std::size_t line = 1;
    std::size_t col = 1;
};

LineCol byte_to_linecol(const std::string& text, std::size_t byte) {
    LineCol lc;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++lc.line;
            lc.col = 1;
        } else {
            ++lc.col;
        }
    }
    return lc;
}

[[noreturn]] void fail_validation(const std::string& msg) {
    throw_error(Errc::Validation, "manifest validation: " + msg);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            fail_validation("unknown key \"" + item.key() + "\" in " + where);
        }
    }
}

std::uint64_t get_count(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) {
        fail_validation("missing key \"" + key + "\" in " + where);
    }
    const json& v = obj.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        auto s = v.get<std::int64_t>();
        if (s < 0) fail_validation("\"" + key + "\" in " + where + " must be non-negative");
        return static_cast<std::uint64_t>(s);
    }
    fail_validation("\"" + key + "\" in " + where + " must be a non-negative integer");
}

double get_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_number()) {
        fail_validation("\"" + key + "\" in " + where + " must be a number");
    }
    return obj.at(key).get<double>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key) || !obj.at(key).is_string()) {
        fail_validation("\"" + key + "\" in " + where + " must be a string");
    }
    return obj.at(key).get<std::string>();
}

bool get_bool(const json& obj, const std::string& key, bool fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) {
        fail_validation("\"" + key + "\" in " + where + " must be a boolean");
    }
    return obj.at(key).get<bool>();
}

Body parse_body(const json& arr, const std::string& where);

BodyNode parse_node(const json& obj, const std::string& where) {
    if (!obj.is_object() || !obj.contains("kind") || !obj.at("kind").is_string()) {
        fail_validation("body node in " + where + " must be an object with a \"kind\"");
    }
    const std::string kind = obj.at("kind").get<std::string>();
    if (kind == "call") {
        reject_unknown_keys(obj, {"kind", "callee"}, where + " call node");
        return BodyNode{Call{get_string(obj, "callee", where + " call node")}};
    }
    if (kind == "loop") {
        reject_unknown_keys(obj, {"kind", "name", "trip_count", "pipelined", "ii", "body"},
                            where + " loop node");
        Loop loop;
        loop.name = get_string(obj, "name", where + " loop node");
        const std::string ctx = where + " loop \"" + loop.name + "\"";
        if (obj.contains("trip_count")) loop.trip_count = get_count(obj, "trip_count", ctx);
        loop.pipelined = get_bool(obj, "pipelined", false, ctx);
        if (loop.pipelined) {
            loop.ii = get_count(obj, "ii", ctx);
            if (loop.ii < 1) fail_validation(ctx + ": pipelined loop requires ii >= 1");
            if (!loop.trip_count) {
                fail_validation(ctx + ": pipelined loop requires a static trip_count");
            }
        } else if (obj.contains("ii")) {
            fail_validation(ctx + ": ii is only meaningful on pipelined loops");
        }
        if (!obj.contains("body") || !obj.at("body").is_array()) {
            fail_validation(ctx + ": missing body array");
        }
        loop.body = parse_body(obj.at("body"), ctx);
        return BodyNode{std::move(loop)};
    }
    if (kind == "compute") {
        reject_unknown_keys(obj, {"kind", "cycles", "label"}, where + " compute node");
        Compute c;
        c.cycles = get_count(obj, "cycles", where + " compute node");
        if (obj.contains("label")) c.label = get_string(obj, "label", where + " compute node");
        return BodyNode{std::move(c)};
    }
    if (kind == "dram") {
        reject_unknown_keys(obj, {"kind", "bursts", "burst_bytes", "label"}, where + " dram node");
        DramAccess d;
        d.bursts = get_count(obj, "bursts", where + " dram node");
        d.burst_bytes = get_count(obj, "burst_bytes", where + " dram node");
        if (obj.contains("label")) d.label = get_string(obj, "label", where + " dram node");
        return BodyNode{std::move(d)};
    }
    if (kind == "parallel") {
        reject_unknown_keys(obj, {"kind", "branches"}, where + " parallel node");
        if (!obj.contains("branches") || !obj.at("branches").is_array()) {
            fail_validation(where + " parallel node: missing branches array");
        }
        Parallel p;
        for (const auto& branch : obj.at("branches")) {
            if (!branch.is_array()) {
                fail_validation(where + " parallel node: each branch must be an array");
            }
            p.branches.push_back(parse_body(branch, where + " parallel branch"));
        }
        if (p.branches.empty()) {
            fail_validation(where + " parallel node: branches must be non-empty");
        }
        return BodyNode{std::move(p)};
    }
    fail_validation("unknown node kind \"" + kind + "\" in " + where);
}

Body parse_body(const json& arr, const std::string& where) {
    Body body;
    for (const auto& node : arr) {
        body.push_back(parse_node(node, where));
    }
    return body;
}

InlineHint parse_inline_hint(const std::string& s, const std::string& where) {
    if (s == "auto") return InlineHint::Auto;
    if (s == "never") return InlineHint::Never;
    if (s == "always") return InlineHint::Always;
    fail_validation(where + ": inline must be one of auto|never|always");
}

PlatformModel parse_platform(const json& obj) {
    if (!obj.is_object()) fail_validation("\"platform\" must be an object");
    reject_unknown_keys(obj, {"name", "dram"}, "platform");
    PlatformModel p;
    p.name = get_string(obj, "name", "platform");
    if (!obj.contains("dram") || !obj.at("dram").is_object()) {
        fail_validation("platform: missing dram object");
    }
    const json& dram = obj.at("dram");
    reject_unknown_keys(dram,
                        {"fixed_latency_cycles", "hw_latency_min", "hw_latency_mean",
                         "bandwidth_gbps"},
                        "platform.dram");
    p.dram.fixed_latency_cycles = get_count(dram, "fixed_latency_cycles", "platform.dram");
    p.dram.hw_latency_min = get_count(dram, "hw_latency_min", "platform.dram");
    p.dram.hw_latency_mean = get_number(dram, "hw_latency_mean", "platform.dram");
    p.dram.bandwidth_gbps = get_number(dram, "bandwidth_gbps", "platform.dram");
    if (p.dram.hw_latency_min < 1) fail_validation("platform.dram: hw_latency_min must be >= 1");
    if (p.dram.hw_latency_mean < static_cast<double>(p.dram.hw_latency_min)) {
        fail_validation("platform.dram: hw_latency_mean must be >= hw_latency_min");
    }
    if (p.dram.bandwidth_gbps <= 0) fail_validation("platform.dram: bandwidth_gbps must be > 0");
    return p;
}

// Walks a body, visiting loops (recursing into their bodies) and calls.
void walk_body(const Body& body, const std::function<void(const Loop&)>& on_loop,
               const std::function<void(const Call&)>& on_call) {
    for (const auto& n : body) {
        if (const auto* call = std::get_if<Call>(&n.node)) {
            if (on_call) on_call(*call);
        } else if (const auto* loop = std::get_if<Loop>(&n.node)) {
            if (on_loop) on_loop(*loop);
            walk_body(loop->body, on_loop, on_call);
        } else if (const auto* par = std::get_if<Parallel>(&n.node)) {
            for (const auto& branch : par->branches) walk_body(branch, on_loop, on_call);
        }
    }
}

void validate_pipelined_bodies(const Body& body, const std::string& fn) {
    for (const auto& n : body) {
        if (const auto* loop = std::get_if<Loop>(&n.node)) {
            if (loop->pipelined) {
                for (const auto& inner : loop->body) {
                    if (!std::holds_alternative<Compute>(inner.node) &&
                        !std::holds_alternative<DramAccess>(inner.node)) {
                        fail_validation("function \"" + fn + "\" loop \"" + loop->name +
                                        "\": pipelined loop bodies may contain only compute "
                                        "and dram nodes");
                    }
                }
            } else {
                validate_pipelined_bodies(loop->body, fn);
            }
        } else if (const auto* par = std::get_if<Parallel>(&n.node)) {
            for (const auto& branch : par->branches) validate_pipelined_bodies(branch, fn);
        }
    }
}

void validate_manifest(const DesignManifest& m) {
    if (m.clock_mhz <= 0) fail_validation("clock_mhz must be > 0");
    if (!m.functions.count(m.top)) {
        fail_validation("top function \"" + m.top + "\" is not defined");
    }

    int pragma_count = 0;
    for (const auto& [name, fn] : m.functions) {
        if (fn.pragma_realprobe) ++pragma_count;

        std::set<std::string> loop_names;
        walk_body(
            fn.body,
            [&](const Loop& loop) {
                if (!loop_names.insert(loop.name).second) {
                    fail_validation("function \"" + name + "\": duplicate loop name \"" +
                                    loop.name + "\"");
                }
            },
            [&](const Call& call) {
                if (!m.functions.count(call.callee)) {
                    fail_validation("function \"" + name + "\" calls undefined function \"" +
                                    call.callee + "\"");
                }
            });
        validate_pipelined_bodies(fn.body, name);
    }
    if (pragma_count > 1) {
        fail_validation("at most one function may set pragma_realprobe");
    }

    // Recursion check with cycle reporting, e.g. ["a","b","a"].
    enum class Mark { None, Active, Done };
    std::map<std::string, Mark> marks;
    std::vector<std::string> stack;
    std::function<void(const std::string&)> dfs = [&](const std::string& fn) {
        Mark& mark = marks[fn];
        if (mark == Mark::Done) return;
        if (mark == Mark::Active) {
            auto first = std::find(stack.begin(), stack.end(), fn);
            std::string cycle;
            for (auto it = first; it != stack.end(); ++it) cycle += "\"" + *it + "\",";
            cycle += "\"" + fn + "\"";
            fail_validation("recursive call cycle [" + cycle + "]");
        }
        mark = Mark::Active;
        stack.push_back(fn);
        walk_body(m.functions.at(fn).body, nullptr,
                  [&](const Call& call) { dfs(call.callee); });
        stack.pop_back();
        marks[fn] = Mark::Done;
    };
    for (const auto& [name, fn] : m.functions) dfs(name);
}

json render_body(const Body& body);

json render_node(const BodyNode& node) {
    json j;
    if (const auto* call = std::get_if<Call>(&node.node)) {
        j["kind"] = "call";
        j["callee"] = call->callee;
    } else if (const auto* loop = std::get_if<Loop>(&node.node)) {
        j["kind"] = "loop";
        j["name"] = loop->name;
        if (loop->trip_count) j["trip_count"] = *loop->trip_count;
        j["pipelined"] = loop->pipelined;
        if (loop->pipelined) j["ii"] = loop->ii;
        j["body"] = render_body(loop->body);
    } else if (const auto* c = std::get_if<Compute>(&node.node)) {
        j["kind"] = "compute";
        j["cycles"] = c->cycles;
        if (!c->label.empty()) j["label"] = c->label;
    } else if (const auto* d = std::get_if<DramAccess>(&node.node)) {
        j["kind"] = "dram";
        j["bursts"] = d->bursts;
        j["burst_bytes"] = d->burst_bytes;
        if (!d->label.empty()) j["label"] = d->label;
    } else if (const auto* p = std::get_if<Parallel>(&node.node)) {
        j["kind"] = "parallel";
        json branches = json::array();
        for (const auto& branch : p->branches) branches.push_back(render_body(branch));
        j["branches"] = std::move(branches);
    }
    return j;
}

json render_body(const Body& body) {
    json arr = json::array();
    for (const auto& node : body) arr.push_back(render_node(node));
    return arr;
}

}  // namespace

std::optional<std::string> DesignManifest::pragma_function() const {
    for (const auto& [name, fn] : functions) {
        if (fn.pragma_realprobe) return name;
    }
    return std::nullopt;
}

DesignManifest parse_manifest(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        LineCol lc = byte_to_linecol(text, e.byte > 0 ? e.byte - 1 : 0);
        std::ostringstream msg;
        msg << "manifest syntax error at line " << lc.line << ", column " << lc.col << ": "
            << e.what();
        throw_error(Errc::Syntax, msg.str());
    }
    if (!doc.is_object()) {
        throw_error(Errc::Syntax, "manifest syntax error: document must be a JSON object");
    }

    reject_unknown_keys(doc, {"design", "clock_mhz", "platform", "budget", "top", "functions"},
                        "manifest");

    DesignManifest m;
    m.name = get_string(doc, "design", "manifest");
    m.clock_mhz = get_number(doc, "clock_mhz", "manifest");
    if (!doc.contains("platform")) fail_validation("missing \"platform\"");
    m.platform = parse_platform(doc.at("platform"));

    if (!doc.contains("budget") || !doc.at("budget").is_object()) {
        fail_validation("missing \"budget\" object");
    }
    const json& budget = doc.at("budget");
    reject_unknown_keys(budget, {"lut", "ff", "bram"}, "budget");
    m.budget.lut = get_count(budget, "lut", "budget");
    m.budget.ff = get_count(budget, "ff", "budget");
    m.budget.bram_blocks = get_count(budget, "bram", "budget");

    m.top = get_string(doc, "top", "manifest");

    if (!doc.contains("functions") || !doc.at("functions").is_object()) {
        fail_validation("missing \"functions\" object");
    }
    for (const auto& item : doc.at("functions").items()) {
        const json& fj = item.value();
        if (!fj.is_object()) fail_validation("function \"" + item.key() + "\" must be an object");
        const std::string where = "function \"" + item.key() + "\"";
        reject_unknown_keys(fj, {"pragma_realprobe", "inline", "estimated_cycles", "body"},
                            where);
        FunctionDef fn;
        fn.name = item.key();
        fn.pragma_realprobe = get_bool(fj, "pragma_realprobe", false, where);
        if (fj.contains("inline")) {
            fn.inline_hint = parse_inline_hint(get_string(fj, "inline", where), where);
        }
        if (fj.contains("estimated_cycles")) {
            fn.estimated_cycles = get_count(fj, "estimated_cycles", where);
        }
        if (!fj.contains("body") || !fj.at("body").is_array()) {
            fail_validation(where + ": missing body array");
        }
        fn.body = parse_body(fj.at("body"), where);
        m.functions.emplace(fn.name, std::move(fn));
    }

    validate_manifest(m);
    return m;
}

std::string render_manifest(const DesignManifest& m) {
    json doc;
    doc["design"] = m.name;
    doc["clock_mhz"] = m.clock_mhz;
    doc["platform"] = {
        {"name", m.platform.name},
        {"dram",
         {{"fixed_latency_cycles", m.platform.dram.fixed_latency_cycles},
          {"hw_latency_min", m.platform.dram.hw_latency_min},
          {"hw_latency_mean", m.platform.dram.hw_latency_mean},
          {"bandwidth_gbps", m.platform.dram.bandwidth_gbps}}},
    };
    doc["budget"] = {{"lut", m.budget.lut}, {"ff", m.budget.ff}, {"bram", m.budget.bram_blocks}};
    doc["top"] = m.top;
    json fns = json::object();
    for (const auto& [name, fn] : m.functions) {
        json fj;
        if (fn.pragma_realprobe) fj["pragma_realprobe"] = true;
        if (fn.inline_hint != InlineHint::Auto) fj["inline"] = to_string(fn.inline_hint);
        if (fn.estimated_cycles) fj["estimated_cycles"] = *fn.estimated_cycles;
        fj["body"] = render_body(fn.body);
        fns[name] = std::move(fj);
    }
    doc["functions"] = std::move(fns);
    return doc.dump(2) + "\n";
}

namespace {

// Inlining support: relabels a spliced body so the callee's work stays
// attributable in the caller ("mult_c0", "mult_L1", ...).
void relabel_spliced(Body& body, const std::string& prefix, std::uint64_t& compute_idx,
                     std::uint64_t& dram_idx) {
    for (auto& n : body) {
        if (auto* loop = std::get_if<Loop>(&n.node)) {
            loop->name = prefix + "_" + loop->name;
            relabel_spliced(loop->body, prefix, compute_idx, dram_idx);
        } else if (auto* c = std::get_if<Compute>(&n.node)) {
            c->label = prefix + "_" + (c->label.empty()
                                           ? "c" + std::to_string(compute_idx)
                                           : c->label);
            ++compute_idx;
        } else if (auto* d = std::get_if<DramAccess>(&n.node)) {
            d->label = prefix + "_" + (d->label.empty() ? "d" + std::to_string(dram_idx)
                                                        : d->label);
            ++dram_idx;
        } else if (auto* p = std::get_if<Parallel>(&n.node)) {
            for (auto& branch : p->branches) relabel_spliced(branch, prefix, compute_idx, dram_idx);
        }
    }
}

struct InlinePass {
    const DesignManifest& m;
    std::set<std::string> protected_fns;
    std::map<std::string, Body> inlined_bodies;  // functions removed by the pass
    std::map<std::string, Body> transformed;

    Body splice(const std::string& caller, const Body& body,
                std::map<std::string, std::uint64_t>& splice_counts) {
        Body out;
        for (const auto& n : body) {
            if (const auto* call = std::get_if<Call>(&n.node)) {
                auto it = inlined_bodies.find(call->callee);
                if (it != inlined_bodies.end()) {
                    std::uint64_t count = ++splice_counts[call->callee];
                    std::string prefix = call->callee;
                    if (count > 1) prefix += "_" + std::to_string(count);
                    Body copy = it->second;
                    std::uint64_t ci = 0, di = 0;
                    relabel_spliced(copy, prefix, ci, di);
                    for (auto& spliced : copy) out.push_back(std::move(spliced));
                    continue;
                }
                out.push_back(n);
            } else if (const auto* loop = std::get_if<Loop>(&n.node)) {
                Loop l = *loop;
                l.body = splice(caller, loop->body, splice_counts);
                out.push_back(BodyNode{std::move(l)});
            } else if (const auto* par = std::get_if<Parallel>(&n.node)) {
                Parallel p;
                for (const auto& branch : par->branches) {
                    p.branches.push_back(splice(caller, branch, splice_counts));
                }
                out.push_back(BodyNode{std::move(p)});
            } else {
                out.push_back(n);
            }
        }
        return out;
    }
};

bool single_compute_body(const Body& body) {
    return body.size() == 1 && std::holds_alternative<Compute>(body[0].node);
}

std::set<std::string> reachable_from(const DesignManifest& m, const std::string& root) {
    std::set<std::string> seen;
    std::function<void(const std::string&)> visit = [&](const std::string& fn) {
        if (!seen.insert(fn).second) return;
        walk_body(m.functions.at(fn).body, nullptr,
                  [&](const Call& call) { visit(call.callee); });
    };
    visit(root);
    return seen;
}

}  // namespace

DesignManifest apply_inlining(const DesignManifest& m, InliningPolicy policy) {
    DesignManifest out = m;
    if (policy == InliningPolicy::InlineOffAll) {
        for (auto& [name, fn] : out.functions) fn.inline_hint = InlineHint::Never;
        return out;
    }

    auto pragma = m.pragma_function();

    InlinePass pass{m, {}, {}, {}};
    pass.protected_fns.insert(m.top);
    if (pragma) pass.protected_fns.insert(*pragma);
    if (policy == InliningPolicy::InlineOffTop && pragma) {
        auto subtree = reachable_from(m, *pragma);
        pass.protected_fns.insert(subtree.begin(), subtree.end());
    }

    // Callers per function, from the original call graph.
    std::map<std::string, std::uint64_t> caller_counts;
    for (const auto& [name, fn] : m.functions) {
        walk_body(fn.body, nullptr,
                  [&](const Call& call) { ++caller_counts[call.callee]; });
    }

    // Reverse-topological (callees first) so splices cascade in one sweep.
    std::vector<std::string> order;
    std::set<std::string> visited;
    std::function<void(const std::string&)> postorder = [&](const std::string& fn) {
        if (!visited.insert(fn).second) return;
        walk_body(m.functions.at(fn).body, nullptr,
                  [&](const Call& call) { postorder(call.callee); });
        order.push_back(fn);
    };
    for (const auto& [name, fn] : m.functions) postorder(name);

    for (const auto& name : order) {
        const FunctionDef& fn = m.functions.at(name);
        std::map<std::string, std::uint64_t> splice_counts;
        Body body = pass.splice(name, fn.body, splice_counts);

        bool eligible = !fn.estimated_cycles &&
                        (fn.inline_hint == InlineHint::Always ||
                         (fn.inline_hint == InlineHint::Auto && single_compute_body(body)));
        if (eligible && pragma && name == *pragma && policy == InliningPolicy::InlineDefault) {
            fail_validation("pragma target \"" + name +
                            "\" would be inlined under the default policy; mark it "
                            "inline=never or use off-all/off-top");
        }
        if (eligible && !pass.protected_fns.count(name) && caller_counts[name] > 0) {
            pass.inlined_bodies.emplace(name, std::move(body));
        } else {
            pass.transformed.emplace(name, std::move(body));
        }
    }

    std::map<std::string, FunctionDef> funcs;
    for (auto& [name, body] : pass.transformed) {
        FunctionDef fn = m.functions.at(name);
        fn.body = std::move(body);
        if (policy == InliningPolicy::InlineOffTop && pass.protected_fns.count(name)) {
            fn.inline_hint = InlineHint::Never;
        }
        funcs.emplace(name, std::move(fn));
    }
    out.functions = std::move(funcs);
    validate_manifest(out);
    return out;
}

namespace {

using MaybeCycles = std::optional<std::uint64_t>;

MaybeCycles add(MaybeCycles a, MaybeCycles b) {
    if (!a || !b) return std::nullopt;
    return *a + *b;
}

struct RollupPass {
    const DesignManifest& m;
    RollupResult& out;
    std::map<std::string, MaybeCycles> fn_totals;

    MaybeCycles function_total(const std::string& name) {
        auto memo = fn_totals.find(name);
        if (memo != fn_totals.end()) return memo->second;
        const FunctionDef& fn = m.functions.at(name);
        std::vector<std::string> chain;
        MaybeCycles body_total = body_rollup(fn.body, name, chain);
        MaybeCycles total = fn.estimated_cycles ? MaybeCycles(*fn.estimated_cycles) : body_total;
        fn_totals[name] = total;
        out.by_path[name] = total;
        return total;
    }

    MaybeCycles body_rollup(const Body& body, const std::string& fn,
                            std::vector<std::string>& chain) {
        MaybeCycles total = 0;
        for (const auto& n : body) {
            if (const auto* call = std::get_if<Call>(&n.node)) {
                total = add(total, function_total(call->callee));
            } else if (const auto* c = std::get_if<Compute>(&n.node)) {
                total = add(total, c->cycles);
            } else if (const auto* d = std::get_if<DramAccess>(&n.node)) {
                total = add(total, d->bursts * m.platform.dram.fixed_latency_cycles);
            } else if (const auto* par = std::get_if<Parallel>(&n.node)) {
                MaybeCycles best = 0;
                bool unknown = false;
                for (const auto& branch : par->branches) {
                    MaybeCycles bt = body_rollup(branch, fn, chain);
                    if (!bt) {
                        unknown = true;
                    } else if (best && *bt > *best) {
                        best = bt;
                    }
                }
                total = add(total, unknown ? std::nullopt : best);
            } else if (const auto* loop = std::get_if<Loop>(&n.node)) {
                chain.push_back(loop->name);
                MaybeCycles inner = body_rollup(loop->body, fn, chain);
                MaybeCycles value;
                if (loop->trip_count && *loop->trip_count == 0) {
                    value = 0;
                } else if (!loop->trip_count || !inner) {
                    value = std::nullopt;
                } else if (loop->pipelined) {
                    value = loop->ii * (*loop->trip_count - 1) + *inner;
                } else {
                    value = *loop->trip_count * *inner;
                }
                std::string path = fn;
                for (const auto& seg : chain) path += "/" + seg;
                out.by_path[path] = value;
                chain.pop_back();
                total = add(total, value);
            }
        }
        return total;
    }
};

}  // namespace

RollupResult static_latency_rollup(const DesignManifest& m) {
    RollupResult result;
    RollupPass pass{m, result, {}};
    for (const auto& [name, fn] : m.functions) pass.function_total(name);
    return result;
}

const char* to_string(InlineHint h) {
    switch (h) {
        case InlineHint::Auto: return "auto";
        case InlineHint::Never: return "never";
        case InlineHint::Always: return "always";
    }
    return "auto";
}

const char* to_string(InliningPolicy p) {
    switch (p) {
        case InliningPolicy::InlineDefault: return "default";
        case InliningPolicy::InlineOffAll: return "off-all";
        case InliningPolicy::InlineOffTop: return "off-top";
    }
    return "default";
}

}  // namespace probeforge
