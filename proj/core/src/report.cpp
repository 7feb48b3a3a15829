#include "probeforge/report.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace probeforge {

using nlohmann::json;

namespace {

std::string fmt_pct(double fraction) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%+.1f%%", fraction * 100.0);
    return buf;
}

// Paths ordered by total cycles descending, ties broken by path.
std::vector<const PathProfile*> ranked_paths(const ProfiledTrace& t) {
    std::vector<const PathProfile*> order;
    for (const auto& p : t.paths) order.push_back(&p);
    std::sort(order.begin(), order.end(), [](const PathProfile* a, const PathProfile* b) {
        if (a->total_cycles != b->total_cycles) return a->total_cycles > b->total_cycles;
        return a->source_path < b->source_path;
    });
    return order;
}

std::vector<const PathProfile*> selected_paths(const ProfiledTrace& t, std::size_t top) {
    if (top == 0 || top >= t.paths.size()) {
        std::vector<const PathProfile*> all;
        for (const auto& p : t.paths) all.push_back(&p);
        return all;
    }
    auto order = ranked_paths(t);
    order.resize(top);
    // Back to trace order for stable presentation.
    std::sort(order.begin(), order.end(), [&](const PathProfile* a, const PathProfile* b) {
        return a - t.paths.data() < b - t.paths.data();
    });
    return order;
}

}  // namespace

std::string render_table(const ProfiledTrace& t, const MappingTable& map, std::size_t top) {
    std::size_t path_w = 11, rtl_w = 8;
    auto rows = selected_paths(t, top);
    for (const auto* p : rows) {
        path_w = std::max(path_w, p->source_path.size());
        rtl_w = std::max(rtl_w, map.rtl_for(p->source_path).value_or("-").size());
    }

    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(path_w) + 2) << "source_path"
        << std::setw(static_cast<int>(rtl_w) + 2) << "rtl_name" << std::setw(19) << "kind"
        << std::right << std::setw(12) << "iterations" << std::setw(14) << "total_cycles"
        << "\n";
    out << std::string(path_w + rtl_w + 4 + 19 + 12 + 14, '-') << "\n";

    bool any_truncated = false;
    for (const auto* p : rows) {
        out << std::left << std::setw(static_cast<int>(path_w) + 2) << p->source_path
            << std::setw(static_cast<int>(rtl_w) + 2) << map.rtl_for(p->source_path).value_or("-")
            << std::setw(19)
            << (p->kind == HierKind::LoopInstance ? "loop_instance" : "function_instance")
            << std::right << std::setw(12)
            << (std::to_string(p->iterations) + (p->iterations_exact ? "" : "+"))
            << std::setw(14) << p->total_cycles;
        if (p->truncated) {
            out << " †";
            any_truncated = true;
        }
        if (p->synthetic_expansion) out << " *";
        out << "\n";
        for (const auto& act : p->activations) {
            out << "    [" << act.start << ", " << act.end << ")\n";
        }
    }
    if (any_truncated) {
        out << "† per-iteration rows stop at the recording cap; totals are exact\n";
    }
    out << "mode=" << t.mode_label << " seed=" << t.seed << " total_cycles=" << t.total_cycles
        << "\n";
    return out.str();
}

std::string render_report_json(const ProfiledTrace& t, const MappingTable& map) {
    json doc;
    doc["mode"] = t.mode_label;
    doc["seed"] = t.seed;
    doc["total_cycles"] = t.total_cycles;
    json rows = json::array();
    for (const auto& p : t.paths) {
        json activations = json::array();
        for (const auto& act : p.activations) activations.push_back({act.start, act.end});
        rows.push_back({
            {"source_path", p.source_path},
            {"rtl_name", map.rtl_for(p.source_path).value_or("")},
            {"kind", to_string(p.kind)},
            {"iterations", p.iterations},
            {"iterations_exact", p.iterations_exact},
            {"total_cycles", p.total_cycles},
            {"truncated", p.truncated},
            {"synthetic_expansion", p.synthetic_expansion},
            {"activations", std::move(activations)},
        });
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

std::string render_report_csv(const ProfiledTrace& t, const MappingTable& map) {
    std::string out = "source_path,rtl_name,kind,iterations,total_cycles,truncated\n";
    for (const auto& p : t.paths) {
        out += p.source_path + "," + map.rtl_for(p.source_path).value_or("") + "," +
               to_string(p.kind) + "," + std::to_string(p.iterations) + "," +
               std::to_string(p.total_cycles) + "," + (p.truncated ? "1" : "0") + "\n";
    }
    return out;
}

std::string render_mapping_table(const MappingTable& map) {
    std::size_t path_w = 11, rtl_w = 8;
    for (const auto& row : map.entries) {
        path_w = std::max(path_w, row.source_path.size());
        rtl_w = std::max(rtl_w, row.rtl_name.size());
    }
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(path_w) + 2) << "source_path"
        << std::setw(static_cast<int>(rtl_w) + 2) << "rtl_name" << "kind\n";
    out << std::string(path_w + rtl_w + 4 + 17, '-') << "\n";
    for (const auto& row : map.entries) {
        out << std::left << std::setw(static_cast<int>(path_w) + 2) << row.source_path
            << std::setw(static_cast<int>(rtl_w) + 2) << row.rtl_name << to_string(row.kind)
            << "\n";
    }
    return out.str();
}

std::string render_mapping_csv(const MappingTable& map) {
    std::string out = "source_path,rtl_name,kind\n";
    for (const auto& row : map.entries) {
        out += row.source_path + "," + row.rtl_name + "," + to_string(row.kind) + "\n";
    }
    return out;
}

std::map<std::string, std::optional<std::uint64_t>> csynth_by_path(const HierarchyTree& tree) {
    std::map<std::string, std::optional<std::uint64_t>> out;
    for (const HierNode& n : tree.nodes) out[n.source_path] = n.est_cycles;
    return out;
}

namespace {

std::vector<std::string> rank_by_cycles(const std::vector<std::pair<std::string, std::uint64_t>>& totals) {
    auto sorted = totals;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> out;
    for (const auto& [path, cycles] : sorted) out.push_back(path);
    return out;
}

}  // namespace

CompareResult compare(const std::map<std::string, std::optional<std::uint64_t>>& csynth,
                      const ProfiledTrace& cosim, const ProfiledTrace& hw) {
    CompareResult result;
    std::vector<std::pair<std::string, std::uint64_t>> csynth_totals, cosim_totals, hw_totals;

    // The profiled top-level spans every submodule and would trivially rank
    // first in every stage; bottleneck rankings cover its submodules.
    std::string subtree_root;
    if (hw.paths.size() > 1) {
        for (const auto& p : hw.paths) {
            const std::string prefix = p.source_path + "/";
            const bool covers_all = std::all_of(
                hw.paths.begin(), hw.paths.end(), [&](const PathProfile& other) {
                    return other.source_path == p.source_path ||
                           other.source_path.rfind(prefix, 0) == 0;
                });
            if (covers_all) {
                subtree_root = p.source_path;
                break;
            }
        }
    }

    for (const auto& p : hw.paths) {
        CompareRow row;
        row.source_path = p.source_path;
        row.hw = p.total_cycles;
        if (const PathProfile* c = cosim.find(p.source_path)) row.cosim = c->total_cycles;
        auto it = csynth.find(p.source_path);
        if (it != csynth.end() && it->second) row.csynth = *it->second;

        if (row.hw > 0) {
            row.cosim_delta = (static_cast<double>(row.cosim) - static_cast<double>(row.hw)) /
                              static_cast<double>(row.hw);
            if (row.csynth) {
                row.csynth_delta =
                    (static_cast<double>(*row.csynth) - static_cast<double>(row.hw)) /
                    static_cast<double>(row.hw);
            }
        }

        if (row.source_path != subtree_root || hw.paths.size() == 1) {
            if (row.csynth) csynth_totals.emplace_back(row.source_path, *row.csynth);
            cosim_totals.emplace_back(row.source_path, row.cosim);
            hw_totals.emplace_back(row.source_path, row.hw);
        }
        result.rows.push_back(std::move(row));
    }

    result.ranking.csynth = rank_by_cycles(csynth_totals);
    result.ranking.cosim = rank_by_cycles(cosim_totals);
    result.ranking.hw = rank_by_cycles(hw_totals);

    for (std::size_t i = 0; i < result.ranking.csynth.size(); ++i) {
        result.csynth_rank[result.ranking.csynth[i]] = static_cast<int>(i) + 1;
    }
    for (std::size_t i = 0; i < result.ranking.cosim.size(); ++i) {
        result.cosim_rank[result.ranking.cosim[i]] = static_cast<int>(i) + 1;
    }
    for (std::size_t i = 0; i < result.ranking.hw.size(); ++i) {
        result.hw_rank[result.ranking.hw[i]] = static_cast<int>(i) + 1;
    }
    return result;
}

std::string CompareResult::to_table() const {
    std::size_t path_w = 11;
    for (const auto& row : rows) path_w = std::max(path_w, row.source_path.size());
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(path_w) + 2) << "source_path" << std::right
        << std::setw(12) << "csynth" << std::setw(12) << "cosim" << std::setw(12) << "hw"
        << std::setw(12) << "csynth%" << std::setw(12) << "cosim%" << "\n";
    out << std::string(path_w + 2 + 60, '-') << "\n";
    for (const auto& row : rows) {
        out << std::left << std::setw(static_cast<int>(path_w) + 2) << row.source_path
            << std::right << std::setw(12)
            << (row.csynth ? std::to_string(*row.csynth) : std::string("?")) << std::setw(12)
            << row.cosim << std::setw(12) << row.hw << std::setw(12)
            << (row.csynth_delta ? fmt_pct(*row.csynth_delta) : std::string("?"))
            << std::setw(12) << (row.cosim_delta ? fmt_pct(*row.cosim_delta) : std::string("-"))
            << "\n";
    }
    auto print_ranking = [&](const char* label, const std::vector<std::string>& order) {
        out << label << ":";
        for (const auto& path : order) out << " " << path;
        out << "\n";
    };
    out << "bottleneck ranking (cycles desc)\n";
    print_ranking("  csynth", ranking.csynth);
    print_ranking("  cosim ", ranking.cosim);
    print_ranking("  hw    ", ranking.hw);
    return out.str();
}

std::string CompareResult::to_json() const {
    json doc;
    json rows_json = json::array();
    for (const auto& row : rows) {
        json rj;
        rj["source_path"] = row.source_path;
        if (row.csynth) rj["csynth"] = *row.csynth; else rj["csynth"] = nullptr;
        rj["cosim"] = row.cosim;
        rj["hw"] = row.hw;
        if (row.csynth_delta) rj["csynth_delta"] = *row.csynth_delta;
        if (row.cosim_delta) rj["cosim_delta"] = *row.cosim_delta;
        auto cr = csynth_rank.find(row.source_path);
        if (cr != csynth_rank.end() && cr->second) rj["csynth_rank"] = *cr->second;
        auto co = cosim_rank.find(row.source_path);
        if (co != cosim_rank.end()) rj["cosim_rank"] = co->second;
        auto hr = hw_rank.find(row.source_path);
        if (hr != hw_rank.end()) {
            rj["hw_rank"] = hr->second;
            if (co != cosim_rank.end()) rj["rank_delta_cosim"] = co->second - hr->second;
            if (cr != csynth_rank.end() && cr->second) {
                rj["rank_delta_csynth"] = *cr->second - hr->second;
            }
        }
        rows_json.push_back(std::move(rj));
    }
    doc["rows"] = std::move(rows_json);
    doc["ranking"] = {
        {"csynth", ranking.csynth}, {"cosim", ranking.cosim}, {"hw", ranking.hw}};
    return doc.dump(2) + "\n";
}

std::string export_gantt(const ProfiledTrace& t, std::size_t top) {
    auto rows = selected_paths(t, top);

    const int label_w = 280;
    const int chart_w = 640;
    const int lane_h = 22;
    const int margin = 30;
    const int height = margin * 2 + lane_h * std::max<int>(1, static_cast<int>(rows.size()));
    std::uint64_t max_end = 1;
    for (const auto* p : rows) {
        for (const auto& act : p->activations) max_end = std::max(max_end, act.end);
    }
    const double scale = static_cast<double>(chart_w) / static_cast<double>(max_end);

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << label_w + chart_w + margin
        << "\" height=\"" << height << "\" font-family=\"monospace\" font-size=\"11\">\n";
    svg << "  <line x1=\"" << label_w << "\" y1=\"" << margin - 8 << "\" x2=\"" << label_w
        << "\" y2=\"" << height - margin + 8 << "\" stroke=\"#555\"/>\n";
    svg << "  <line x1=\"" << label_w << "\" y1=\"" << height - margin + 8 << "\" x2=\""
        << label_w + chart_w << "\" y2=\"" << height - margin + 8 << "\" stroke=\"#555\"/>\n";
    svg << "  <text x=\"" << label_w << "\" y=\"" << margin - 14 << "\">cycle 0</text>\n";
    svg << "  <text x=\"" << label_w + chart_w - 60 << "\" y=\"" << margin - 14 << "\">cycle "
        << max_end << "</text>\n";

    int lane = 0;
    for (const auto* p : rows) {
        const int y = margin + lane * lane_h;
        svg << "  <text x=\"4\" y=\"" << y + 14 << "\">" << p->source_path << "</text>\n";
        for (const auto& act : p->activations) {
            const double x = label_w + static_cast<double>(act.start) * scale;
            const double w = std::max(1.0, static_cast<double>(act.length()) * scale);
            svg << "  <rect data-path=\"" << p->source_path << "\" data-start=\"" << act.start
                << "\" data-end=\"" << act.end << "\" x=\"" << x << "\" y=\"" << y + 4
                << "\" width=\"" << w << "\" height=\"" << lane_h - 8 << "\" fill=\""
                << (p->kind == HierKind::LoopInstance ? "#7aa6c2" : "#c2917a")
                << "\" stroke=\"#333\"/>\n";
        }
        ++lane;
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string profiled_trace_events(const ProfiledTrace& t) {
    json events = json::array();
    std::uint64_t lane = 0;
    for (const auto& p : t.paths) {
        for (const auto& act : p.activations) {
            events.push_back({
                {"name", p.source_path},
                {"cat", to_string(p.kind)},
                {"ph", "X"},
                {"ts", act.start},
                {"dur", act.length()},
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

}  // namespace probeforge
