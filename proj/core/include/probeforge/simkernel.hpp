#pragma once
// Deterministic discrete-event execution of a manifest under two memory
// models: "cosim" (fixed empirical burst latency) and "hw" (seeded
// long-tailed burst latency with dump-traffic contention). Produces the
// ground-truth activity trace and, in profiled runs, drives the profiler IP
// with the exact boundary toggles.

#include <cstdint>
#include <string>
#include <vector>

#include "probeforge/hierarchy.hpp"
#include "probeforge/instrument.hpp"
#include "probeforge/profiler.hpp"

namespace probeforge {

enum class SimMode { Cosim, Hw };

struct ActivityInterval {
    std::uint64_t start = 0;  // inclusive
    std::uint64_t end = 0;    // exclusive; start == end marks a zero-length activation

    std::uint64_t length() const { return end - start; }
    bool operator==(const ActivityInterval&) const = default;
};

struct DramEvent {
    std::uint64_t cycle = 0;
    std::uint64_t bytes = 0;
    bool operator==(const DramEvent&) const = default;
};

struct NodeActivity {
    std::vector<ActivityInterval> activations;  // one envelope per execution
    std::vector<ActivityInterval> iterations;   // loop nodes only
};

struct ExecutionTrace {
    std::vector<NodeActivity> per_node;  // indexed by NodeId
    std::uint64_t total_cycles = 0;      // root's last end_cycle
    std::vector<DramEvent> dram_events;

    std::uint64_t total_dram_bytes() const;
};

/// Execute the design from its top function. Deterministic for a fixed
/// (manifest, mode, seed).
ExecutionTrace run(const DesignManifest& m, const HierarchyTree& tree, SimMode mode,
                   std::uint64_t seed);
ExecutionTrace run(const DesignManifest& m, SimMode mode, std::uint64_t seed);

struct ProfiledRun {
    ExecutionTrace oracle;
    RawTimestampLog log;
    std::uint64_t dram_traffic_bytes = 0;  // profiling dump traffic (S_dram)
    std::uint64_t wall_cycles = 0;
};

/// Execute with the profiler attached: every interval boundary of a probed
/// node is delivered at its exact cycle, per-iteration toggles truncated after
/// alloc.truncate_loop_iters iterations per loop execution. Dump traffic
/// contends with hw-mode DRAM accesses and lands in oracle.dram_events.
ProfiledRun run_profiled(const DesignManifest& m, const HierarchyTree& tree,
                         const ProbePlan& plan, const CounterAllocation& alloc, SimMode mode,
                         std::uint64_t seed);

struct PathProfile {
    std::string source_path;
    HierKind kind = HierKind::FunctionInstance;
    std::uint64_t iterations = 0;  // executions (functions) / iteration count (loops)
    bool iterations_exact = true;
    std::uint64_t total_cycles = 0;
    std::vector<ActivityInterval> activations;  // per-execution / per-iteration intervals
    std::vector<ActivityInterval> envelopes;    // loop-level executions (== activations
                                                //   for function instances)
    bool synthetic_expansion = false;  // pipelined iterations expanded analytically
    bool truncated = false;            // recorded iterations stop at the truncation cap
};

struct ProfiledTrace {
    std::vector<PathProfile> paths;  // plan order
    std::string mode_label;
    std::uint64_t seed = 0;
    std::uint64_t total_cycles = 0;

    const PathProfile* find(const std::string& source_path) const;
    std::string to_json() const;
    static ProfiledTrace from_json(const std::string& text);
};

/// Map a raw timestamp log back to source paths. Pipelined loops are expanded
/// analytically to the full iteration set; truncated non-pipelined loops keep
/// their recorded iterations plus the exact loop totals. Throws
/// Error{LossyLog} when the log overflowed.
ProfiledTrace reconstruct(const RawTimestampLog& log, const HierarchyTree& tree,
                          const CounterAllocation& alloc);

/// The oracle view in path form (the ILA-analog / cosim comparison column).
ProfiledTrace trace_to_profiled(const ExecutionTrace& trace, const HierarchyTree& tree,
                                const std::string& mode_label, std::uint64_t seed);

/// Flat export: {"total_cycles": N, "nodes": {path: [[start,end], ...]}, ...}.
std::string trace_to_json(const ExecutionTrace& trace, const HierarchyTree& tree);

/// Chrome trace-event-format export for external timeline viewers.
std::string trace_to_trace_events(const ExecutionTrace& trace, const HierarchyTree& tree);

const char* to_string(SimMode mode);
SimMode sim_mode_from_string(const std::string& s);

}  // namespace probeforge
