#pragma once
// Source-level presentation: per-module tables, the three-stage comparison
// with bottleneck rankings, and Gantt/trace-event exports.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "probeforge/simkernel.hpp"

namespace probeforge {

/// Fixed-width per-module table with per-activation detail rows; truncated
/// loops carry a footnote marker. top == 0 renders every path.
std::string render_table(const ProfiledTrace& t, const MappingTable& map, std::size_t top = 0);

std::string render_report_json(const ProfiledTrace& t, const MappingTable& map);
std::string render_report_csv(const ProfiledTrace& t, const MappingTable& map);

std::string render_mapping_table(const MappingTable& map);
std::string render_mapping_csv(const MappingTable& map);

/// Static estimates per source path, the "C-synth" comparison column.
std::map<std::string, std::optional<std::uint64_t>> csynth_by_path(const HierarchyTree& tree);

struct CompareRow {
    std::string source_path;
    std::optional<std::uint64_t> csynth;  // nullopt renders as "?"
    std::uint64_t cosim = 0;
    std::uint64_t hw = 0;
    std::optional<double> csynth_delta;  // (csynth - hw) / hw
    std::optional<double> cosim_delta;   // (cosim - hw) / hw
};

struct BottleneckRanking {
    std::vector<std::string> csynth;  // paths by cycles descending; unknown excluded
    std::vector<std::string> cosim;
    std::vector<std::string> hw;
};

struct CompareResult {
    std::vector<CompareRow> rows;  // hw-trace path order
    BottleneckRanking ranking;
    // 1-based rank per stage, keyed by path; csynth absent for "?" entries.
    std::map<std::string, std::optional<int>> csynth_rank;
    std::map<std::string, int> cosim_rank;
    std::map<std::string, int> hw_rank;

    std::string to_table() const;
    std::string to_json() const;
};

CompareResult compare(const std::map<std::string, std::optional<std::uint64_t>>& csynth,
                      const ProfiledTrace& cosim, const ProfiledTrace& hw);

/// SVG timeline, one lane per path (top-K by total cycles when top > 0). Every
/// activation rect carries machine-readable data-path / data-start / data-end
/// attributes so tests can parse geometry back without image diffing.
std::string export_gantt(const ProfiledTrace& t, std::size_t top = 0);

/// Chrome trace-event JSON of the profiled trace.
std::string profiled_trace_events(const ProfiledTrace& t);

}  // namespace probeforge
