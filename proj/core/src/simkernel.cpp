#include "probeforge/simkernel.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <queue>

#include "json.hpp"
#include "probeforge/errors.hpp"

namespace probeforge {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Shifted geometric with the configured floor and mean; the long tail stands
// in for controller queueing and bus contention.
std::uint64_t geometric_latency(std::uint64_t& rng, std::uint64_t min_cycles, double mean_cycles) {
    if (mean_cycles <= static_cast<double>(min_cycles)) return min_cycles;
    const double p = 1.0 / (1.0 + mean_cycles - static_cast<double>(min_cycles));
    const double u = unit_double(splitmix64(rng));
    const double tail = std::floor(std::log1p(-u) / std::log1p(-p));
    return min_cycles + static_cast<std::uint64_t>(tail);
}

struct Join;

struct BodyFrame {
    const Body* body = nullptr;
    std::size_t pc = 0;
    std::optional<NodeId> context;  // hierarchy node whose children map the sites
    std::size_t site_cursor = 0;
    std::string fn_name;
    const DramAccess* dram = nullptr;  // in-progress burst sequence
    std::uint64_t bursts_left = 0;
};

struct CallFrame {
    std::optional<NodeId> node;
    std::uint64_t start = 0;
};

struct LoopFrame {
    const Loop* loop = nullptr;
    std::optional<NodeId> node;
    std::string fn_name;
    std::uint64_t trips = 0;
    std::uint64_t iter = 0;  // 1-based once started
    std::uint64_t loop_start = 0;
    std::uint64_t iter_start = 0;
    bool in_iteration = false;
};

struct PipeFrame {
    struct Ev {
        std::uint64_t cycle;
        Stream stream;
        Edge edge;
    };
    std::optional<NodeId> node;
    std::uint64_t end_t = 0;
    std::vector<Ev> events;
    std::size_t next = 0;
};

using Frame = std::variant<BodyFrame, CallFrame, LoopFrame, PipeFrame>;

struct Strand {
    std::uint64_t id = 0;
    std::uint64_t t = 0;
    std::uint64_t rng = 0;
    std::vector<Frame> stack;
    Join* join = nullptr;
};

struct Join {
    Strand* parent = nullptr;
    std::size_t remaining = 0;
    std::uint64_t max_end = 0;
};

class Engine {
  public:
    Engine(const DesignManifest& m, const HierarchyTree& tree, SimMode mode, std::uint64_t seed,
           ProfilerState* profiler, const ProbePlan* plan, std::uint32_t truncate)
        : m_(m), tree_(tree), mode_(mode), seed_(seed), profiler_(profiler), truncate_(truncate) {
        trace_.per_node.resize(tree.size());
        probe_of_node_.assign(tree.size(), std::nullopt);
        if (plan) {
            for (std::size_t i = 0; i < plan->probes.size(); ++i) {
                probe_of_node_[plan->probes[i].node] = static_cast<std::uint32_t>(i);
            }
        }
        pragma_ = tree.node(tree.root).function_name;
    }

    ExecutionTrace execute() {
        Strand* top = new_strand(0, 0x6a09e667f3bcc908ull ^ seed_);
        if (m_.top == pragma_) {
            enter_function(*top, pragma_, tree_.root);
        } else {
            top->stack.push_back(BodyFrame{&m_.functions.at(m_.top).body, 0, std::nullopt, 0,
                                           m_.top, nullptr, 0});
        }
        schedule(top, 0);

        while (!queue_.empty()) {
            QEntry entry = queue_.top();
            queue_.pop();
            step(*entry.strand);
        }

        if (profiler_) profiler_->advance(design_end_);

        const auto& root_acts = trace_.per_node[tree_.root].activations;
        trace_.total_cycles = root_acts.empty() ? 0 : root_acts.back().end;
        std::sort(trace_.dram_events.begin(), trace_.dram_events.end(),
                  [](const DramEvent& a, const DramEvent& b) {
                      return a.cycle != b.cycle ? a.cycle < b.cycle : a.bytes < b.bytes;
                  });
        return std::move(trace_);
    }

  private:
    struct QEntry {
        std::uint64_t cycle;
        std::uint64_t seq;
        Strand* strand;
        bool operator>(const QEntry& other) const {
            return cycle != other.cycle ? cycle > other.cycle : seq > other.seq;
        }
    };

    Strand* new_strand(std::uint64_t t, std::uint64_t rng_seed) {
        auto strand = std::make_unique<Strand>();
        strand->id = strands_.size();
        strand->t = t;
        strand->rng = rng_seed;
        strands_.push_back(std::move(strand));
        return strands_.back().get();
    }

    void schedule(Strand* s, std::uint64_t cycle) { queue_.push({cycle, seq_++, s}); }

    void deliver(std::optional<NodeId> node, Stream stream, Edge edge, std::uint64_t cycle) {
        if (!node || !profiler_) return;
        auto probe = probe_of_node_[*node];
        if (!probe) return;
        profiler_->advance(cycle);
        profiler_->on_toggle(*probe, stream, edge, cycle);
    }

    void record_activation(std::optional<NodeId> node, std::uint64_t start, std::uint64_t end) {
        if (node) trace_.per_node[*node].activations.push_back({start, end});
    }

    void record_iteration(std::optional<NodeId> node, std::uint64_t start, std::uint64_t end) {
        if (node) trace_.per_node[*node].iterations.push_back({start, end});
    }

    std::uint64_t burst_latency(Strand& s, bool contention_applies) {
        if (mode_ == SimMode::Cosim) return m_.platform.dram.fixed_latency_cycles;
        std::uint64_t lat = geometric_latency(s.rng, m_.platform.dram.hw_latency_min,
                                              m_.platform.dram.hw_latency_mean);
        if (contention_applies && profiler_ && profiler_->dump_in_flight(s.t)) {
            lat *= 2;  // dump stream holds half the effective bus
        }
        return lat;
    }

    std::uint64_t draw_trips(const Loop& loop, const std::string& fn_name) {
        if (loop.trip_count) return *loop.trip_count;
        std::uint64_t key = seed_ ^ fnv1a("trip:" + fn_name + "/" + loop.name);
        return 1 + splitmix64(key) % 8;
    }

    // Emits the rise toggle and pushes the call/body frames for an instance.
    void enter_function(Strand& s, const std::string& fn, std::optional<NodeId> node) {
        if (node) {
            deliver(node, Stream::Activation, Edge::Rise, s.t);
        }
        s.stack.push_back(CallFrame{node, s.t});
        s.stack.push_back(BodyFrame{&m_.functions.at(fn).body, 0, node, 0, fn, nullptr, 0});
    }

    std::optional<NodeId> next_child(BodyFrame& bf) {
        if (!bf.context) return std::nullopt;
        return tree_.node(*bf.context).children.at(bf.site_cursor++);
    }

    void start_pipelined(Strand& s, const Loop& loop, std::optional<NodeId> node,
                         std::uint64_t trips) {
        const std::uint64_t start = s.t;

        // One schedule evaluated per execution; every iteration replays it.
        std::uint64_t body_dur = 0;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> burst_offsets;
        for (const BodyNode& n : loop.body) {
            if (const auto* c = std::get_if<Compute>(&n.node)) {
                body_dur += c->cycles;
            } else if (const auto* d = std::get_if<DramAccess>(&n.node)) {
                for (std::uint64_t b = 0; b < d->bursts; ++b) {
                    burst_offsets.emplace_back(body_dur, d->burst_bytes);
                    body_dur += burst_latency(s, /*contention_applies=*/false);
                }
            }
        }
        const std::uint64_t end =
            trips == 0 ? start : start + loop.ii * (trips - 1) + body_dur;

        record_activation(node, start, end);
        for (std::uint64_t i = 0; i < trips; ++i) {
            const std::uint64_t slot_start = start + i * loop.ii;
            const std::uint64_t slot_end = (i + 1 < trips) ? start + (i + 1) * loop.ii : end;
            record_iteration(node, slot_start, slot_end);
            for (const auto& [offset, bytes] : burst_offsets) {
                trace_.dram_events.push_back({slot_start + offset, bytes});
            }
        }

        PipeFrame pf;
        pf.node = node;
        pf.end_t = end;
        if (node && profiler_ && probe_of_node_[*node]) {
            pf.events.push_back({start, Stream::Activation, Edge::Rise});
            const std::uint64_t recorded = std::min<std::uint64_t>(trips, truncate_);
            for (std::uint64_t i = 0; i < recorded; ++i) {
                const std::uint64_t slot_start = start + i * loop.ii;
                const std::uint64_t slot_end = (i + 1 < trips) ? start + (i + 1) * loop.ii : end;
                pf.events.push_back({slot_start, Stream::Iteration, Edge::Rise});
                pf.events.push_back({slot_end, Stream::Iteration, Edge::Fall});
            }
            pf.events.push_back({end, Stream::Activation, Edge::Fall});
        }
        s.stack.push_back(std::move(pf));
    }

    void finish_strand(Strand& s) {
        design_end_ = std::max(design_end_, s.t);
        if (s.join) {
            Join* join = s.join;
            join->max_end = std::max(join->max_end, s.t);
            if (--join->remaining == 0) {
                join->parent->t = join->max_end;
                schedule(join->parent, join->max_end);
            }
        }
    }

    void step(Strand& s) {
        while (true) {
            if (s.stack.empty()) {
                finish_strand(s);
                return;
            }
            Frame& frame = s.stack.back();

            if (auto* bf = std::get_if<BodyFrame>(&frame)) {
                if (bf->dram) {
                    trace_.dram_events.push_back({s.t, bf->dram->burst_bytes});
                    const std::uint64_t lat = burst_latency(s, /*contention_applies=*/true);
                    if (--bf->bursts_left == 0) {
                        bf->dram = nullptr;
                        ++bf->pc;
                    }
                    if (lat > 0) {
                        s.t += lat;
                        schedule(&s, s.t);
                        return;
                    }
                    continue;
                }
                if (bf->pc >= bf->body->size()) {
                    s.stack.pop_back();
                    continue;
                }
                const BodyNode& node = (*bf->body)[bf->pc];

                if (const auto* c = std::get_if<Compute>(&node.node)) {
                    ++bf->pc;
                    if (c->cycles > 0) {
                        s.t += c->cycles;
                        schedule(&s, s.t);
                        return;
                    }
                    continue;
                }
                if (const auto* d = std::get_if<DramAccess>(&node.node)) {
                    if (d->bursts == 0) {
                        ++bf->pc;
                        continue;
                    }
                    bf->dram = d;
                    bf->bursts_left = d->bursts;
                    continue;
                }
                if (const auto* call = std::get_if<Call>(&node.node)) {
                    ++bf->pc;
                    std::optional<NodeId> child;
                    if (bf->context) {
                        child = next_child(*bf);
                    } else if (call->callee == pragma_) {
                        child = tree_.root;
                    }
                    enter_function(s, call->callee, child);
                    continue;
                }
                if (const auto* loop = std::get_if<Loop>(&node.node)) {
                    ++bf->pc;
                    std::optional<NodeId> lnode;
                    if (bf->context) lnode = next_child(*bf);
                    const std::uint64_t trips = draw_trips(*loop, bf->fn_name);
                    if (loop->pipelined) {
                        start_pipelined(s, *loop, lnode, trips);
                        continue;
                    }
                    deliver(lnode, Stream::Activation, Edge::Rise, s.t);
                    s.stack.push_back(
                        LoopFrame{loop, lnode, bf->fn_name, trips, 0, s.t, 0, false});
                    continue;
                }
                if (const auto* par = std::get_if<Parallel>(&node.node)) {
                    ++bf->pc;
                    std::size_t offset = bf->site_cursor;
                    for (const auto& branch : par->branches) bf->site_cursor += count_sites(branch);

                    auto join = std::make_unique<Join>();
                    join->parent = &s;
                    join->remaining = par->branches.size();
                    join->max_end = s.t;
                    Join* join_ptr = join.get();
                    joins_.push_back(std::move(join));

                    std::size_t branch_index = 0;
                    for (const auto& branch : par->branches) {
                        std::uint64_t child_seed = s.rng ^ (0xa0761d6478bd642full * (branch_index + 1));
                        Strand* child = new_strand(s.t, splitmix64(child_seed));
                        child->join = join_ptr;
                        child->stack.push_back(BodyFrame{&branch, 0, bf->context,
                                                         offset, bf->fn_name, nullptr, 0});
                        offset += count_sites(branch);
                        schedule(child, s.t);
                        ++branch_index;
                    }
                    return;  // parent resumes at the join
                }
            } else if (auto* cf = std::get_if<CallFrame>(&frame)) {
                record_activation(cf->node, cf->start, s.t);
                deliver(cf->node, Stream::Activation, Edge::Fall, s.t);
                s.stack.pop_back();
                continue;
            } else if (auto* lf = std::get_if<LoopFrame>(&frame)) {
                if (lf->in_iteration) {
                    record_iteration(lf->node, lf->iter_start, s.t);
                    if (lf->iter <= truncate_) {
                        deliver(lf->node, Stream::Iteration, Edge::Fall, s.t);
                    }
                    lf->in_iteration = false;
                    continue;
                }
                if (lf->iter < lf->trips) {
                    lf->iter_start = s.t;
                    ++lf->iter;
                    if (lf->iter <= truncate_) {
                        deliver(lf->node, Stream::Iteration, Edge::Rise, s.t);
                    }
                    lf->in_iteration = true;
                    s.stack.push_back(BodyFrame{&lf->loop->body, 0, lf->node, 0, lf->fn_name,
                                                nullptr, 0});
                    continue;
                }
                record_activation(lf->node, lf->loop_start, s.t);
                deliver(lf->node, Stream::Activation, Edge::Fall, s.t);
                s.stack.pop_back();
                continue;
            } else if (auto* pf = std::get_if<PipeFrame>(&frame)) {
                while (pf->next < pf->events.size() && pf->events[pf->next].cycle == s.t) {
                    const auto& ev = pf->events[pf->next];
                    deliver(pf->node, ev.stream, ev.edge, ev.cycle);
                    ++pf->next;
                }
                if (pf->next < pf->events.size()) {
                    s.t = pf->events[pf->next].cycle;
                    schedule(&s, s.t);
                    return;
                }
                if (s.t < pf->end_t) {
                    s.t = pf->end_t;
                    schedule(&s, s.t);
                    return;
                }
                s.stack.pop_back();
                continue;
            }
        }
    }

    const DesignManifest& m_;
    const HierarchyTree& tree_;
    SimMode mode_;
    std::uint64_t seed_;
    ProfilerState* profiler_;
    std::uint32_t truncate_;
    std::string pragma_;
    std::vector<std::optional<std::uint32_t>> probe_of_node_;

    ExecutionTrace trace_;
    std::vector<std::unique_ptr<Strand>> strands_;
    std::vector<std::unique_ptr<Join>> joins_;
    std::priority_queue<QEntry, std::vector<QEntry>, std::greater<QEntry>> queue_;
    std::uint64_t seq_ = 0;
    std::uint64_t design_end_ = 0;
};

}  // namespace

std::uint64_t ExecutionTrace::total_dram_bytes() const {
    std::uint64_t total = 0;
    for (const auto& e : dram_events) total += e.bytes;
    return total;
}

ExecutionTrace run(const DesignManifest& m, const HierarchyTree& tree, SimMode mode,
                   std::uint64_t seed) {
    Engine engine(m, tree, mode, seed, nullptr, nullptr, 4);
    return engine.execute();
}

ExecutionTrace run(const DesignManifest& m, SimMode mode, std::uint64_t seed) {
    HierarchyTree tree = build_hierarchy(m);
    return run(m, tree, mode, seed);
}

ProfiledRun run_profiled(const DesignManifest& m, const HierarchyTree& tree,
                         const ProbePlan& plan, const CounterAllocation& alloc, SimMode mode,
                         std::uint64_t seed) {
    if (plan.probes.size() != alloc.probes.size()) {
        throw_error(Errc::Validation, "probe plan and counter allocation disagree");
    }
    std::vector<ProbeRuntime> runtime;
    for (std::size_t i = 0; i < plan.probes.size(); ++i) {
        if (plan.probes[i].node != alloc.probes[i].node) {
            throw_error(Errc::Validation, "probe plan and counter allocation disagree");
        }
        runtime.push_back({plan.probes[i].node, tree.node(plan.probes[i].node).rtl_name,
                           alloc.effective_depth(i)});
    }
    const double bytes_per_cycle =
        m.platform.dram.bandwidth_gbps * 1000.0 / m.clock_mhz;

    ProfilerState profiler(std::move(runtime), alloc.counter_width, alloc.dumps_enabled(),
                           bytes_per_cycle);
    Engine engine(m, tree, mode, seed, &profiler, &plan, alloc.truncate_loop_iters);

    ProfiledRun result;
    result.oracle = engine.execute();
    result.log = profiler.finalize();
    result.dram_traffic_bytes = result.log.dumped_bytes();
    result.wall_cycles = result.oracle.total_cycles;
    for (const auto& dump : result.log.dumps) {
        result.oracle.dram_events.push_back({dump.issue_cycle, dump.bytes});
    }
    std::sort(result.oracle.dram_events.begin(), result.oracle.dram_events.end(),
              [](const DramEvent& a, const DramEvent& b) {
                  return a.cycle != b.cycle ? a.cycle < b.cycle : a.bytes < b.bytes;
              });
    return result;
}

namespace {

std::vector<ActivityInterval> pair_stream(const std::vector<TimestampEntry>& entries,
                                          Stream stream, const std::string& rtl_name) {
    std::vector<ActivityInterval> out;
    std::optional<std::uint64_t> open;
    for (const auto& e : entries) {
        if (e.stream != stream) continue;
        if (e.edge == Edge::Rise) {
            open = e.cycle;
        } else {
            if (!open) {
                throw_error(Errc::EdgeOrderViolation,
                            "fall without rise in log for " + rtl_name);
            }
            out.push_back({*open, e.cycle});
            open.reset();
        }
    }
    if (open) {
        throw_error(Errc::EdgeOrderViolation, "unterminated activation in log for " + rtl_name);
    }
    return out;
}

}  // namespace

ProfiledTrace reconstruct(const RawTimestampLog& log, const HierarchyTree& tree,
                          const CounterAllocation& alloc) {
    if (log.lossy) {
        throw_error(Errc::LossyLog,
                    "timestamp log is lossy (queue overflow during a dump); the run cannot "
                    "be reconstructed exactly");
    }
    ProfiledTrace out;
    std::uint64_t max_end = 0;

    for (std::size_t i = 0; i < log.probes.size(); ++i) {
        const ProbeLog& pl = log.probes[i];
        const HierNode& node = tree.node(pl.node);

        PathProfile path;
        path.source_path = node.source_path;
        path.kind = node.kind;
        path.envelopes = pair_stream(pl.entries, Stream::Activation, pl.rtl_name);
        for (const auto& env : path.envelopes) {
            path.total_cycles += env.length();
            max_end = std::max(max_end, env.end);
        }

        if (node.kind == HierKind::FunctionInstance) {
            path.activations = path.envelopes;
            path.iterations = path.envelopes.size();
        } else if (node.pipelined) {
            // Fixed-interval expansion: 4 recorded iterations plus II rebuild
            // the full set exactly.
            const std::uint64_t trips = node.trip_count.value_or(0);
            for (const auto& env : path.envelopes) {
                for (std::uint64_t k = 0; k < trips; ++k) {
                    const std::uint64_t slot_start = env.start + k * node.ii;
                    const std::uint64_t slot_end =
                        (k + 1 < trips) ? env.start + (k + 1) * node.ii : env.end;
                    path.activations.push_back({slot_start, slot_end});
                }
            }
            path.iterations = trips * path.envelopes.size();
            path.synthetic_expansion = true;
        } else {
            path.activations = pair_stream(pl.entries, Stream::Iteration, pl.rtl_name);
            if (node.trip_count) {
                path.iterations = *node.trip_count * path.envelopes.size();
                path.truncated = *node.trip_count > alloc.truncate_loop_iters;
            } else {
                path.iterations = path.activations.size();
                const std::uint64_t per_exec =
                    path.envelopes.empty() ? 0 : path.activations.size() / path.envelopes.size();
                path.truncated = per_exec >= alloc.truncate_loop_iters &&
                                 alloc.truncate_loop_iters > 0 && !path.envelopes.empty();
                path.iterations_exact = !path.truncated;
            }
        }
        out.paths.push_back(std::move(path));
    }
    out.total_cycles = max_end;
    return out;
}

ProfiledTrace trace_to_profiled(const ExecutionTrace& trace, const HierarchyTree& tree,
                                const std::string& mode_label, std::uint64_t seed) {
    ProfiledTrace out;
    out.mode_label = mode_label;
    out.seed = seed;
    for (NodeId id : tree.preorder()) {
        const HierNode& node = tree.node(id);
        const NodeActivity& act = trace.per_node[id];
        PathProfile path;
        path.source_path = node.source_path;
        path.kind = node.kind;
        path.envelopes = act.activations;
        for (const auto& env : path.envelopes) path.total_cycles += env.length();
        if (node.kind == HierKind::FunctionInstance) {
            path.activations = act.activations;
            path.iterations = act.activations.size();
        } else {
            path.activations = act.iterations;
            path.iterations = act.iterations.size();
        }
        out.paths.push_back(std::move(path));
    }
    out.total_cycles = trace.total_cycles;
    return out;
}

const PathProfile* ProfiledTrace::find(const std::string& source_path) const {
    for (const auto& p : paths) {
        if (p.source_path == source_path) return &p;
    }
    return nullptr;
}

namespace {

json intervals_to_json(const std::vector<ActivityInterval>& intervals) {
    json arr = json::array();
    for (const auto& iv : intervals) arr.push_back({iv.start, iv.end});
    return arr;
}

std::vector<ActivityInterval> intervals_from_json(const json& arr) {
    std::vector<ActivityInterval> out;
    for (const auto& iv : arr) {
        out.push_back({iv.at(0).get<std::uint64_t>(), iv.at(1).get<std::uint64_t>()});
    }
    return out;
}

}  // namespace

std::string ProfiledTrace::to_json() const {
    json doc;
    doc["mode"] = mode_label;
    doc["seed"] = seed;
    doc["total_cycles"] = total_cycles;
    json paths_json = json::array();
    for (const auto& p : paths) {
        paths_json.push_back({
            {"source_path", p.source_path},
            {"kind", to_string(p.kind)},
            {"iterations", p.iterations},
            {"iterations_exact", p.iterations_exact},
            {"total_cycles", p.total_cycles},
            {"activations", intervals_to_json(p.activations)},
            {"envelopes", intervals_to_json(p.envelopes)},
            {"synthetic_expansion", p.synthetic_expansion},
            {"truncated", p.truncated},
        });
    }
    doc["paths"] = std::move(paths_json);
    return doc.dump(2) + "\n";
}

ProfiledTrace ProfiledTrace::from_json(const std::string& text) {
    json doc = json::parse(text);
    ProfiledTrace out;
    out.mode_label = doc.at("mode").get<std::string>();
    out.seed = doc.at("seed").get<std::uint64_t>();
    out.total_cycles = doc.at("total_cycles").get<std::uint64_t>();
    for (const auto& pj : doc.at("paths")) {
        PathProfile p;
        p.source_path = pj.at("source_path").get<std::string>();
        p.kind = pj.at("kind").get<std::string>() == "loop_instance" ? HierKind::LoopInstance
                                                                     : HierKind::FunctionInstance;
        p.iterations = pj.at("iterations").get<std::uint64_t>();
        p.iterations_exact = pj.at("iterations_exact").get<bool>();
        p.total_cycles = pj.at("total_cycles").get<std::uint64_t>();
        p.activations = intervals_from_json(pj.at("activations"));
        p.envelopes = intervals_from_json(pj.at("envelopes"));
        p.synthetic_expansion = pj.at("synthetic_expansion").get<bool>();
        p.truncated = pj.at("truncated").get<bool>();
        out.paths.push_back(std::move(p));
    }
    return out;
}

std::string trace_to_json(const ExecutionTrace& trace, const HierarchyTree& tree) {
    json doc;
    doc["total_cycles"] = trace.total_cycles;
    json nodes = json::object();
    for (NodeId id : tree.preorder()) {
        const HierNode& node = tree.node(id);
        const NodeActivity& act = trace.per_node[id];
        nodes[node.source_path] = intervals_to_json(
            node.kind == HierKind::LoopInstance ? act.iterations : act.activations);
    }
    doc["nodes"] = std::move(nodes);
    json events = json::array();
    for (const auto& e : trace.dram_events) events.push_back({e.cycle, e.bytes});
    doc["dram_events"] = std::move(events);
    return doc.dump(2) + "\n";
}

std::string trace_to_trace_events(const ExecutionTrace& trace, const HierarchyTree& tree) {
    json events = json::array();
    std::uint64_t lane = 0;
    for (NodeId id : tree.preorder()) {
        const HierNode& node = tree.node(id);
        const NodeActivity& act = trace.per_node[id];
        const auto& intervals =
            node.kind == HierKind::LoopInstance ? act.iterations : act.activations;
        for (const auto& iv : intervals) {
            events.push_back({
                {"name", node.source_path},
                {"cat", to_string(node.kind)},
                {"ph", "X"},
                {"ts", iv.start},
                {"dur", iv.length()},
                {"pid", 0},
                {"tid", lane},
            });
        }
        ++lane;
    }
    json doc;
    doc["traceEvents"] = std::move(events);
    doc["displayTimeUnit"] = "ns";
    return doc.dump(2) + "\n";
}

const char* to_string(SimMode mode) { return mode == SimMode::Cosim ? "cosim" : "hw"; }

SimMode sim_mode_from_string(const std::string& s) {
    if (s == "cosim") return SimMode::Cosim;
    if (s == "hw") return SimMode::Hw;
    throw_error(Errc::Validation, "unknown mode \"" + s + "\" (expected cosim|hw)");
}

}  // namespace probeforge
