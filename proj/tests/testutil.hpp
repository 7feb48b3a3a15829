#pragma once
// Shared fixtures and generators for the test suites.

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "probeforge/costmodel.hpp"
#include "probeforge/dse.hpp"
#include "probeforge/hierarchy.hpp"
#include "probeforge/instrument.hpp"
#include "probeforge/manifest.hpp"
#include "probeforge/profiler.hpp"
#include "probeforge/simkernel.hpp"

namespace testutil {

namespace pf = probeforge;

// main -> compute (profiled) -> {mult: 40 cycles, sum: 8x5-cycle while loop}.
inline std::string toy_manifest_text() {
    return R"json({
  "design": "toy",
  "clock_mhz": 100.0,
  "platform": {
    "name": "pynq-z2",
    "dram": {"fixed_latency_cycles": 10, "hw_latency_min": 10, "hw_latency_mean": 15.0,
             "bandwidth_gbps": 1.43}
  },
  "budget": {"lut": 53200, "ff": 106400, "bram": 140},
  "top": "main",
  "functions": {
    "main": {"body": [{"kind": "call", "callee": "compute"}]},
    "compute": {
      "pragma_realprobe": true,
      "inline": "never",
      "body": [{"kind": "call", "callee": "mult"}, {"kind": "call", "callee": "sum"}]
    },
    "mult": {"inline": "never", "body": [{"kind": "compute", "cycles": 40}]},
    "sum": {
      "inline": "never",
      "body": [{"kind": "loop", "name": "L_while", "trip_count": 8, "pipelined": false,
                "body": [{"kind": "compute", "cycles": 5}]}]
    }
  }
})json";
}

inline pf::DesignManifest toy_manifest() { return pf::parse_manifest(toy_manifest_text()); }

// Block-streaming kernel with heavy DRAM traffic; hw latency 1.5x the cosim
// model.
inline std::string gemm_manifest_text() {
    return R"json({
  "design": "gemm",
  "clock_mhz": 100.0,
  "platform": {
    "name": "pynq-z2",
    "dram": {"fixed_latency_cycles": 20, "hw_latency_min": 20, "hw_latency_mean": 30.0,
             "bandwidth_gbps": 1.43}
  },
  "budget": {"lut": 53200, "ff": 106400, "bram": 140},
  "top": "main",
  "functions": {
    "main": {"body": [{"kind": "call", "callee": "gemm"}]},
    "gemm": {
      "pragma_realprobe": true,
      "inline": "never",
      "body": [{"kind": "loop", "name": "L_blocks", "trip_count": 8, "pipelined": false,
                "body": [{"kind": "dram", "bursts": 64, "burst_bytes": 4096},
                         {"kind": "compute", "cycles": 200}]}]
    }
  }
})json";
}

// Static estimates point at mult; hw-model DRAM behavior makes sum the real
// bottleneck.
inline std::string rankswap_manifest_text() {
    return R"json({
  "design": "rankswap",
  "clock_mhz": 100.0,
  "platform": {
    "name": "pynq-z2",
    "dram": {"fixed_latency_cycles": 20, "hw_latency_min": 20, "hw_latency_mean": 45.0,
             "bandwidth_gbps": 1.43}
  },
  "budget": {"lut": 53200, "ff": 106400, "bram": 140},
  "top": "main",
  "functions": {
    "main": {"body": [{"kind": "call", "callee": "compute"}]},
    "compute": {
      "pragma_realprobe": true,
      "inline": "never",
      "body": [{"kind": "call", "callee": "mult"}, {"kind": "call", "callee": "sum"}]
    },
    "mult": {"inline": "never", "body": [{"kind": "compute", "cycles": 4000}]},
    "sum": {
      "inline": "never",
      "body": [{"kind": "loop", "name": "L_acc", "trip_count": 4, "pipelined": false,
                "body": [{"kind": "dram", "bursts": 32, "burst_bytes": 1024},
                         {"kind": "compute", "cycles": 10}]}]
    }
  }
})json";
}

// Starves the dump port: effectively zero bandwidth plus a dense toggle train.
inline std::string overflow_manifest_text() {
    return R"json({
  "design": "overflow",
  "clock_mhz": 100.0,
  "platform": {
    "name": "slow-bus",
    "dram": {"fixed_latency_cycles": 1, "hw_latency_min": 1, "hw_latency_mean": 1.0,
             "bandwidth_gbps": 0.000001}
  },
  "budget": {"lut": 53200, "ff": 106400, "bram": 140},
  "top": "main",
  "functions": {
    "main": {"body": [{"kind": "call", "callee": "kern"}]},
    "kern": {
      "pragma_realprobe": true,
      "inline": "never",
      "body": [{"kind": "loop", "name": "L_tight", "trip_count": 8, "pipelined": false,
                "body": [{"kind": "compute", "cycles": 1}]}]
    }
  }
})json";
}

// --- programmatic builders -------------------------------------------------

inline pf::BodyNode compute_node(std::uint64_t cycles) {
    return pf::BodyNode{pf::Compute{cycles, ""}};
}

inline pf::BodyNode call_node(const std::string& callee) {
    return pf::BodyNode{pf::Call{callee}};
}

inline pf::BodyNode dram_node(std::uint64_t bursts, std::uint64_t bytes) {
    return pf::BodyNode{pf::DramAccess{bursts, bytes, ""}};
}

inline pf::BodyNode loop_node(const std::string& name, std::uint64_t trip, pf::Body body,
                              bool pipelined = false, std::uint64_t ii = 0) {
    pf::Loop loop;
    loop.name = name;
    loop.trip_count = trip;
    loop.pipelined = pipelined;
    loop.ii = ii;
    loop.body = std::move(body);
    return pf::BodyNode{std::move(loop)};
}

inline pf::DesignManifest base_manifest(const std::string& name) {
    pf::DesignManifest m;
    m.name = name;
    m.clock_mhz = 100.0;
    m.platform.name = "pynq-z2";
    m.platform.dram = {10, 10, 18.0, 1.43};
    m.budget = {53200, 106400, 140};
    return m;
}

/// Ternary call tree with `instances` function-instance nodes under the
/// pragma root (223 reproduces the stress shape: 3 direct children, depth ~5).
inline pf::DesignManifest wide_manifest(std::size_t instances) {
    pf::DesignManifest m = base_manifest("wide" + std::to_string(instances));
    const std::size_t leaves = instances - 1;

    pf::FunctionDef main_fn;
    main_fn.name = "main";
    main_fn.body.push_back(call_node("kern"));
    m.functions["main"] = main_fn;
    m.top = "main";

    pf::FunctionDef kern;
    kern.name = "kern";
    kern.pragma_realprobe = true;
    kern.inline_hint = pf::InlineHint::Never;
    for (std::size_t c = 0; c < 3 && c < leaves; ++c) {
        kern.body.push_back(call_node("f" + std::to_string(c)));
    }
    kern.body.push_back(compute_node(10));
    m.functions["kern"] = kern;

    for (std::size_t i = 0; i < leaves; ++i) {
        pf::FunctionDef fn;
        fn.name = "f" + std::to_string(i);
        fn.inline_hint = pf::InlineHint::Never;
        for (std::size_t c = 3 * i + 3; c < 3 * i + 6 && c < leaves; ++c) {
            fn.body.push_back(call_node("f" + std::to_string(c)));
        }
        fn.body.push_back(compute_node(5 + i % 7));
        m.functions[fn.name] = fn;
    }
    return m;
}

/// 48-module kernel moving a lot of DRAM data relative to its profile size.
inline pf::DesignManifest bench24_manifest() {
    pf::DesignManifest m = base_manifest("bench24");
    m.platform.dram = {20, 20, 28.0, 1.43};

    pf::FunctionDef main_fn;
    main_fn.name = "main";
    main_fn.body.push_back(call_node("kern"));
    m.functions["main"] = main_fn;
    m.top = "main";

    pf::FunctionDef kern;
    kern.name = "kern";
    kern.pragma_realprobe = true;
    kern.inline_hint = pf::InlineHint::Never;
    kern.body.push_back(dram_node(4096, 4096));
    for (int s = 0; s < 7; ++s) {
        kern.body.push_back(call_node("stage" + std::to_string(s)));
    }
    // Pads below bring the hierarchy to exactly 48 nodes.
    for (int i = 0; i < 12; ++i) {
        kern.body.push_back(call_node("pad" + std::to_string(i)));
        pf::FunctionDef pad;
        pad.name = "pad" + std::to_string(i);
        pad.inline_hint = pf::InlineHint::Never;
        pad.body.push_back(compute_node(10 + i));
        m.functions[pad.name] = pad;
    }
    m.functions["kern"] = kern;

    for (int s = 0; s < 7; ++s) {
        pf::FunctionDef stage;
        stage.name = "stage" + std::to_string(s);
        stage.inline_hint = pf::InlineHint::Never;
        pf::Body loop_body;
        loop_body.push_back(compute_node(40));
        loop_body.push_back(call_node("leaf" + std::to_string(s)));
        stage.body.push_back(loop_node("L_outer", 3, std::move(loop_body)));
        stage.body.push_back(call_node("tail" + std::to_string(s)));
        m.functions[stage.name] = stage;

        pf::FunctionDef leaf;
        leaf.name = "leaf" + std::to_string(s);
        leaf.inline_hint = pf::InlineHint::Never;
        pf::Body inner;
        inner.push_back(compute_node(15));
        leaf.body.push_back(loop_node("L_inner", 2, std::move(inner)));
        m.functions[leaf.name] = leaf;

        pf::FunctionDef tail;
        tail.name = "tail" + std::to_string(s);
        tail.inline_hint = pf::InlineHint::Never;
        tail.body.push_back(compute_node(25));
        m.functions[tail.name] = tail;
    }
    return m;
}

// --- randomized corpus -----------------------------------------------------

struct CorpusParams {
    std::uint64_t seed = 0;
    std::size_t max_depth = 5;       // nesting budget (loops/calls/parallel)
    std::size_t max_modules = 64;    // hierarchy nodes under the pragma root
    std::uint64_t max_trip = 4;
    std::uint64_t min_compute = 0;
    std::uint64_t max_compute = 60;
    bool allow_dram = true;
    bool allow_parallel = true;
    bool allow_pipelined = true;
};

class CorpusGen {
  public:
    explicit CorpusGen(const CorpusParams& params)
        : p_(params), rng_(params.seed * 0x9e3779b97f4a7c15ull + 0x243f6a8885a308d3ull) {}

    pf::DesignManifest generate() {
        // Function reuse instantiates subtrees a second time, so the budget
        // bookkeeping can undercount; verify against the real tree and retry
        // smaller when needed.
        for (std::size_t allowance = p_.max_modules;; allowance = allowance > 8 ? allowance / 2 : 8) {
            m_ = base_manifest("corpus" + std::to_string(p_.seed));
            m_.functions.clear();
            functions_.clear();
            costs_.clear();
            budget_ = allowance;

            const std::string kern = fresh_function(p_.max_depth, true);
            m_.functions.at(kern).pragma_realprobe = true;

            pf::FunctionDef main_fn;
            main_fn.name = "main";
            main_fn.body.push_back(call_node(kern));
            m_.functions["main"] = main_fn;
            m_.top = "main";

            if (pf::build_hierarchy(m_).size() <= p_.max_modules) return m_;
        }
    }

  private:
    std::uint64_t rand(std::uint64_t lo, std::uint64_t hi) {  // inclusive
        return lo + rng_() % (hi - lo + 1);
    }

    // Instance cost of calling fn (its subtree size in the hierarchy).
    std::size_t cost(const std::string& fn) const { return costs_.at(fn); }

    std::string fresh_function(std::size_t depth, bool is_root) {
        const std::string name = "fn" + std::to_string(counter_++);
        pf::FunctionDef fn;
        fn.name = name;
        fn.inline_hint = pf::InlineHint::Never;
        std::size_t subtree = 1;
        if (budget_ > 0) budget_ -= 1;
        fn.body = gen_body(depth, is_root ? 3 : 2, subtree);
        m_.functions[name] = std::move(fn);
        costs_[name] = subtree;
        return name;
    }

    pf::Body gen_body(std::size_t depth, std::size_t max_nodes, std::size_t& subtree) {
        pf::Body body;
        const std::size_t nodes = rand(1, max_nodes);
        for (std::size_t i = 0; i < nodes; ++i) {
            switch (rand(0, 9)) {
                case 0:
                case 1:
                case 2:
                    body.push_back(compute_node(rand(p_.min_compute, p_.max_compute)));
                    break;
                case 3:
                    if (p_.allow_dram) {
                        body.push_back(dram_node(rand(1, 6), 64 << rand(0, 4)));
                    } else {
                        body.push_back(compute_node(rand(1, p_.max_compute)));
                    }
                    break;
                case 4:
                case 5: {
                    if (depth == 0 || budget_ == 0) {
                        body.push_back(compute_node(rand(0, p_.max_compute)));
                        break;
                    }
                    // Loop: occasionally pipelined (flat body), else nested.
                    if (p_.allow_pipelined && rand(0, 2) == 0) {
                        pf::Body flat;
                        flat.push_back(compute_node(rand(1, 20)));
                        if (p_.allow_dram && rand(0, 1) == 0) {
                            flat.push_back(dram_node(rand(1, 3), 256));
                        }
                        body.push_back(loop_node(loop_name(), rand(1, p_.max_trip),
                                                 std::move(flat), true, rand(1, 3)));
                        subtree += 1;
                        budget_ -= 1;
                    } else {
                        std::size_t inner_subtree = 1;
                        budget_ -= 1;
                        pf::Body inner = gen_body(depth - 1, 2, inner_subtree);
                        body.push_back(
                            loop_node(loop_name(), rand(0, p_.max_trip), std::move(inner)));
                        subtree += inner_subtree;
                    }
                    break;
                }
                case 6:
                case 7: {
                    if (depth == 0 || budget_ < 2) {
                        body.push_back(compute_node(rand(0, p_.max_compute)));
                        break;
                    }
                    // Call a fresh function or reuse an existing one (an extra
                    // instance of its whole subtree).
                    std::string callee;
                    if (!functions_.empty() && rand(0, 2) == 0) {
                        const std::string& cand = functions_[rand(0, functions_.size() - 1)];
                        if (cost(cand) <= budget_) {
                            callee = cand;
                            budget_ -= cost(cand);
                        }
                    }
                    if (callee.empty()) {
                        callee = fresh_function(depth - 1, false);
                        functions_.push_back(callee);
                    }
                    subtree += cost(callee);
                    body.push_back(call_node(callee));
                    break;
                }
                default: {
                    if (!p_.allow_parallel || depth == 0 || budget_ == 0) {
                        body.push_back(compute_node(rand(0, p_.max_compute)));
                        break;
                    }
                    pf::Parallel par;
                    const std::size_t branches = rand(2, 3);
                    for (std::size_t b = 0; b < branches; ++b) {
                        std::size_t branch_subtree = 0;
                        par.branches.push_back(gen_body(depth - 1, 2, branch_subtree));
                        subtree += branch_subtree;
                    }
                    body.push_back(pf::BodyNode{std::move(par)});
                    break;
                }
            }
        }
        return body;
    }

    std::string loop_name() { return "L" + std::to_string(loop_counter_++); }

    CorpusParams p_;
    std::mt19937_64 rng_;
    pf::DesignManifest m_;
    std::size_t budget_ = 0;
    std::size_t counter_ = 0;
    std::size_t loop_counter_ = 0;
    std::vector<std::string> functions_;
    std::map<std::string, std::size_t> costs_;
};

inline pf::DesignManifest random_manifest(const CorpusParams& params) {
    return CorpusGen(params).generate();
}

// --- reconstruction equality ------------------------------------------------

/// Empty string when reconstruct() agrees with the oracle exactly; otherwise
/// a description of the first mismatch.
inline std::string check_reconstruction_exact(const pf::ExecutionTrace& oracle,
                                              const pf::ProfiledTrace& recon,
                                              const pf::HierarchyTree& tree,
                                              const pf::ProbePlan& plan,
                                              const pf::CounterAllocation& alloc) {
    auto fail = [](const std::string& path, const std::string& what) {
        return path + ": " + what;
    };
    if (recon.paths.size() != plan.probes.size()) return "path count != probe count";

    for (std::size_t i = 0; i < plan.probes.size(); ++i) {
        const pf::HierNode& node = tree.node(plan.probes[i].node);
        const pf::NodeActivity& act = oracle.per_node[node.id];
        const pf::PathProfile& path = recon.paths[i];
        if (path.source_path != node.source_path) return fail(path.source_path, "path order");

        if (path.envelopes != act.activations) {
            return fail(path.source_path, "envelope boundaries differ");
        }
        std::uint64_t oracle_total = 0;
        for (const auto& iv : act.activations) oracle_total += iv.length();
        if (path.total_cycles != oracle_total) {
            return fail(path.source_path, "total " + std::to_string(path.total_cycles) +
                                              " != oracle " + std::to_string(oracle_total));
        }

        if (node.kind == pf::HierKind::FunctionInstance) {
            if (path.activations != act.activations) {
                return fail(path.source_path, "activation boundaries differ");
            }
        } else if (node.pipelined) {
            if (path.activations != act.iterations) {
                return fail(path.source_path, "pipelined expansion != oracle iterations");
            }
        } else {
            // Recorded = first min(trip, truncate) iterations of each
            // execution.
            const std::size_t execs = act.activations.size();
            std::vector<pf::ActivityInterval> expected;
            if (execs > 0) {
                const std::size_t per_exec = act.iterations.size() / execs;
                const std::size_t keep =
                    std::min<std::size_t>(per_exec, alloc.truncate_loop_iters);
                for (std::size_t e = 0; e < execs; ++e) {
                    for (std::size_t k = 0; k < keep; ++k) {
                        expected.push_back(act.iterations[e * per_exec + k]);
                    }
                }
            }
            if (path.activations != expected) {
                return fail(path.source_path, "recorded iterations differ");
            }
        }
    }
    if (recon.total_cycles != oracle.total_cycles) {
        return "trace total " + std::to_string(recon.total_cycles) + " != oracle " +
               std::to_string(oracle.total_cycles);
    }
    return "";
}

/// Full-default profiling pass used by many tests: every node probed,
/// allocation at defaults (dump ratio 0).
struct ProfiledFixture {
    pf::DesignManifest m;
    pf::HierarchyTree tree;
    pf::ProbePlan plan;
    pf::CounterAllocation alloc;
};

inline ProfiledFixture make_fixture(pf::DesignManifest m, std::uint32_t dump_ratio_pct = 0) {
    ProfiledFixture fx{std::move(m), {}, {}, {}};
    fx.tree = pf::build_hierarchy(fx.m);
    fx.plan = pf::extract_signals(fx.tree, fx.tree.preorder());
    pf::AllocConfig cfg;
    cfg.dump_ratio_pct = dump_ratio_pct;
    fx.alloc = pf::allocate_counters(fx.plan, fx.tree, pf::static_latency_rollup(fx.m), cfg);
    return fx;
}

}  // namespace testutil
