#pragma once
// One-shot pipeline orchestration behind the `profile` subcommand: parse ->
// inline -> hierarchy -> instrument -> adapt -> profiled run -> reconstruct ->
// report, with every stage keyed into the workspace store.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "probeforge/costmodel.hpp"
#include "probeforge/dse.hpp"
#include "probeforge/workspace.hpp"

namespace probeforge {

struct RunConfig {
    std::string manifest_path;
    std::optional<std::string> target;  // source path; default = whole tree
    InliningPolicy policy = InliningPolicy::InlineDefault;
    SimMode mode = SimMode::Hw;
    std::uint64_t seed = 0;
    StoragePolicy storage = StoragePolicy::AllRegister;
    std::uint32_t hybrid_threshold = 8;
    std::uint32_t dump_ratio_pct = 0;
    std::string workspace_dir;  // empty: $PROBE_FORGE_WORKSPACE or .probe-forge
    std::string out_dir;        // empty: "<manifest stem>.run"
    std::optional<std::string> constants_path;
};

/// Exit codes: 0 success (also "nothing to profile"), 1 validation/syntax,
/// 2 capacity (unfittable), 3 lossy or overflowed run.
int run_pipeline(const RunConfig& rc, std::ostream& out, std::ostream& err);

/// Shared helpers for the CLI subcommands.
std::string resolve_workspace_dir(const std::string& flag_value);
std::string read_text_file(const std::string& path);  // throws Error{Io}
void write_text_file(const std::string& path, const std::string& content);
CostConstants load_constants(const std::optional<std::string>& path);

}  // namespace probeforge
