#pragma once
// Cycle-accurate model of the profiling IP: a global cycle counter plus one
// edge-triggered performance counter per probe. Queues that fill are dumped to
// DRAM over a serialized port; once a probe has dumped it streams all later
// entries, staging them in the freed slots while a transfer is in flight.
// Arrivals that find the stage full are lost to a shadow list and mark the
// run lossy — never dropped silently.

#include <cstdint>
#include <string>
#include <vector>

#include "probeforge/hierarchy.hpp"

namespace probeforge {

enum class Edge { Rise, Fall };

// A loop probe carries two logical signals through one queue: the loop's own
// activation envelope and the per-iteration pulses. Edge alternation holds per
// stream; entries interleave in delivery order.
enum class Stream { Activation, Iteration };

struct TimestampEntry {
    std::uint32_t probe = 0;  // index into the probe list
    Stream stream = Stream::Activation;
    Edge edge = Edge::Rise;
    std::uint64_t cycle = 0;

    bool operator==(const TimestampEntry&) const = default;
};

struct DumpRecord {
    std::uint32_t probe = 0;
    std::uint64_t entry_count = 0;
    std::uint64_t bytes = 0;  // entry_count * counter_width/8, exactly
    std::uint64_t issue_cycle = 0;
    std::uint64_t completion_cycle = 0;
};

struct ProbeRuntime {
    NodeId node = 0;
    std::string rtl_name;
    std::uint32_t capacity = 2;  // on-chip slots (effective depth)
};

struct ProbeLog {
    NodeId node = 0;
    std::string rtl_name;
    std::vector<TimestampEntry> entries;  // dumped (in dump order) + residual
};

struct RawTimestampLog {
    std::vector<ProbeLog> probes;
    std::vector<DumpRecord> dumps;
    std::vector<TimestampEntry> lost;  // overflow shadow list (diagnostics)
    bool lossy = false;
    std::uint64_t final_cycle = 0;
    std::uint32_t counter_width = 32;

    std::uint64_t total_entries() const;
    std::uint64_t dumped_bytes() const;

    /// Golden serialization contract: "probe_rtl_name,edge,cycle" rows, probes
    /// in plan order, entries in delivery order.
    std::string to_csv() const;

    std::string to_json() const;
    static RawTimestampLog from_json(const std::string& text);
};

class ProfilerState {
  public:
    ProfilerState(std::vector<ProbeRuntime> probes, std::uint32_t counter_width,
                  bool dumps_enabled, double dump_bytes_per_cycle);

    /// Record a toggle at the current counter value. Pre: cycle equals the
    /// global counter and edges alternate per (probe, stream); two rises in a
    /// row indicate a simulator bug and throw Error{EdgeOrderViolation}.
    void on_toggle(std::uint32_t probe, Stream stream, Edge edge, std::uint64_t cycle);

    /// Move the global counter forward, draining any dump whose transfer
    /// completes by then. Throws Error{CounterOverflow} when to_cycle does not
    /// fit the counter width (no wrap-around).
    void advance(std::uint64_t to_cycle);

    /// True when the DRAM port is busy with a dump at `cycle`.
    bool dump_in_flight(std::uint64_t cycle) const;

    /// Close the run: flush staged entries of streaming probes, then assemble
    /// the per-probe log (dumped entries in dump order followed by residual
    /// queue contents).
    RawTimestampLog finalize();

    std::uint64_t global_counter() const { return global_counter_; }
    std::uint64_t dumped_bytes() const;
    std::size_t queue_size(std::uint32_t probe) const { return state_[probe].queue.size(); }
    bool full_flag(std::uint32_t probe) const { return state_[probe].full_flag; }
    bool overflow_flag(std::uint32_t probe) const { return state_[probe].overflow; }
    bool lossy() const { return lossy_; }
    const std::vector<DumpRecord>& dump_records() const { return dumps_; }

  private:
    struct PerProbe {
        std::vector<TimestampEntry> queue;   // on-chip slots
        std::vector<TimestampEntry> dumped;  // entries already sent to DRAM
        bool streaming = false;              // has issued at least one dump
        bool in_flight = false;
        bool full_flag = false;
        bool overflow = false;
        bool expect_rise[2] = {true, true};  // per-stream alternation state
    };

    void issue_dump(std::uint32_t probe, std::uint64_t cycle);

    std::vector<ProbeRuntime> probes_;
    std::vector<PerProbe> state_;
    std::vector<DumpRecord> dumps_;
    std::vector<TimestampEntry> lost_;
    std::size_t drained_ = 0;  // dumps_[0..drained_) have completed
    std::uint64_t last_completion_ = 0;
    std::uint64_t global_counter_ = 0;
    std::uint32_t counter_width_;
    bool dumps_enabled_;
    double dump_bytes_per_cycle_;
    bool lossy_ = false;
};

const char* to_string(Edge e);
const char* to_string(Stream s);

}  // namespace probeforge
