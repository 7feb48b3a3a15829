#pragma once
// Design manifest: the declarative description of an HLS-like kernel that the
// rest of the toolchain consumes. Holds the parsed document model, the JSON
// parser/canonical serializer, the inlining rewrite, and the static latency
// rollup.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace probeforge {

struct ResourceBudget {
    std::uint64_t lut = 0;
    std::uint64_t ff = 0;
    std::uint64_t bram_blocks = 0;

    bool operator==(const ResourceBudget&) const = default;
};

struct DramModel {
    std::uint64_t fixed_latency_cycles = 0;  // per-burst latency, cosim mode
    std::uint64_t hw_latency_min = 1;        // per-burst floor, hw mode
    double hw_latency_mean = 1.0;            // per-burst mean, hw mode
    double bandwidth_gbps = 1.0;             // effective DRAM bandwidth

    bool operator==(const DramModel&) const = default;
};

struct PlatformModel {
    std::string name;
    DramModel dram;

    bool operator==(const PlatformModel&) const = default;
};

enum class InlineHint { Auto, Never, Always };

struct BodyNode;
using Body = std::vector<BodyNode>;

struct Call {
    std::string callee;
    bool operator==(const Call&) const = default;
};

struct Loop {
    std::string name;
    std::optional<std::uint64_t> trip_count;  // absent = data dependent
    bool pipelined = false;
    std::uint64_t ii = 0;  // initiation interval, meaningful iff pipelined
    Body body;
    bool operator==(const Loop&) const = default;
};

struct Compute {
    std::uint64_t cycles = 0;
    std::string label;  // provenance tag set by inlining, empty otherwise
    bool operator==(const Compute&) const = default;
};

struct DramAccess {
    std::uint64_t bursts = 0;
    std::uint64_t burst_bytes = 0;
    std::string label;
    bool operator==(const DramAccess&) const = default;
};

struct Parallel {
    std::vector<Body> branches;
    bool operator==(const Parallel&) const = default;
};

struct BodyNode {
    std::variant<Call, Loop, Compute, DramAccess, Parallel> node;
    bool operator==(const BodyNode&) const = default;
};

struct FunctionDef {
    std::string name;
    bool pragma_realprobe = false;
    InlineHint inline_hint = InlineHint::Auto;
    std::optional<std::uint64_t> estimated_cycles;
    Body body;
    bool operator==(const FunctionDef&) const = default;
};

struct DesignManifest {
    std::string name;
    double clock_mhz = 100.0;
    PlatformModel platform;
    ResourceBudget budget;
    std::string top;
    std::map<std::string, FunctionDef> functions;

    bool operator==(const DesignManifest&) const = default;

    /// Clock period in seconds.
    double cycle_seconds() const { return 1.0 / (clock_mhz * 1e6); }

    /// Name of the function carrying the profiling pragma, if any.
    std::optional<std::string> pragma_function() const;
};

enum class InliningPolicy { InlineDefault, InlineOffAll, InlineOffTop };

/// Parse and fully validate a manifest document. Throws Error{Syntax} with
/// line/column positions for malformed JSON and Error{Validation} for
/// structural violations (dangling callees, recursion, duplicate loop names,
/// multiple pragmas, unknown keys, ...).
DesignManifest parse_manifest(const std::string& text);

/// Canonical serializer: sorted keys, optional fields emitted only when
/// meaningful. parse_manifest(render_manifest(m)) == m.
std::string render_manifest(const DesignManifest& m);

/// Apply an inlining policy as a pure tree rewrite. Under InlineDefault,
/// functions hinted `always` plus single-compute bodies (hinted `auto`) are
/// spliced into each caller; spliced child nodes are relabeled
/// "<callee>_<node>". Throws Error{Validation} if the pragma target itself
/// would be inlined.
DesignManifest apply_inlining(const DesignManifest& m, InliningPolicy policy);

/// Static latency estimates per function and per loop path ("fn/loopA/loopB").
/// nullopt marks entries that cannot be computed statically (absent trip
/// counts without an estimate override).
struct RollupResult {
    std::map<std::string, std::optional<std::uint64_t>> by_path;

    std::optional<std::uint64_t> at(const std::string& path) const {
        auto it = by_path.find(path);
        return it == by_path.end() ? std::nullopt : it->second;
    }
};

RollupResult static_latency_rollup(const DesignManifest& m);

const char* to_string(InlineHint h);
const char* to_string(InliningPolicy p);

}  // namespace probeforge
