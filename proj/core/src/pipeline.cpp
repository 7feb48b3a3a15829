#include "probeforge/pipeline.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "probeforge/errors.hpp"
#include "probeforge/report.hpp"

namespace probeforge {

namespace fs = std::filesystem;

std::string resolve_workspace_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("PROBE_FORGE_WORKSPACE"); env && *env) return env;
    return ".probe-forge";
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_error(Errc::Io, "cannot open file: " + path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_text_file(const std::string& path, const std::string& content) {
    fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw_error(Errc::Io, "cannot write file: " + path);
    out << content;
}

CostConstants load_constants(const std::optional<std::string>& path) {
    if (!path) return CostConstants{};
    return CostConstants::from_json(read_text_file(*path));
}

int run_pipeline(const RunConfig& rc, std::ostream& out, std::ostream& err) {
    try {
        if (!fs::exists(rc.manifest_path)) {
            err << "error: manifest not found: " << rc.manifest_path << "\n";
            return 1;
        }
        const std::string text = read_text_file(rc.manifest_path);
        const DesignManifest parsed = parse_manifest(text);

        if (!parsed.pragma_function()) {
            out << "nothing to profile: no function carries pragma_realprobe in "
                << rc.manifest_path << "\n";
            return 0;
        }

        const DesignManifest m = apply_inlining(parsed, rc.policy);
        const std::string normalized = render_manifest(m);
        const CostConstants constants = load_constants(rc.constants_path);

        ArtifactStore store(resolve_workspace_dir(rc.workspace_dir));
        StageKeys keys;
        keys.manifest = store.store(ArtifactKind::ManifestNormalized, normalized, normalized);

        // Extraction: keyed by the normalized manifest alone.
        const HierarchyTree tree = build_hierarchy(m);
        const MappingTable mapping = build_mapping(tree);
        const std::string hierarchy_json = hierarchy_to_json(tree);
        const std::string mapping_json = mapping_to_json(mapping);
        keys.hierarchy =
            store.store(ArtifactKind::Hierarchy, "hierarchy:" + normalized, hierarchy_json);
        keys.mapping =
            store.store(ArtifactKind::Mapping, "mapping:" + hierarchy_json, mapping_json);

        // Probe configuration: keyed by extraction plus the target/config.
        std::vector<NodeId> targets;
        if (rc.target) {
            targets = tree.subtree(locate(tree, *rc.target));
        } else {
            targets = tree.preorder();
        }
        const ProbePlan plan = extract_signals(tree, targets);
        const std::string plan_json = probe_plan_to_json(plan, tree);
        keys.probe_plan = store.store(ArtifactKind::ProbePlan,
                                      "probe_plan:" + keys.hierarchy + ":" +
                                          rc.target.value_or("<all>"),
                                      plan_json);

        const RollupResult rollup = static_latency_rollup(m);
        AllocConfig alloc_cfg;
        alloc_cfg.dump_ratio_pct = rc.dump_ratio_pct;
        CounterAllocation demand = allocate_counters(plan, tree, rollup, alloc_cfg);
        for (auto& p : demand.probes) {
            switch (rc.storage) {
                case StoragePolicy::AllRegister: p.storage = StorageTag::Register; break;
                case StoragePolicy::AllBram: p.storage = StorageTag::Bram; break;
                case StoragePolicy::Hybrid:
                    p.storage = p.depth > rc.hybrid_threshold ? StorageTag::Bram
                                                              : StorageTag::Register;
                    break;
            }
        }
        const ResourceEstimate origin = origin_usage(m);
        const CounterAllocation alloc =
            adapt_allocation(demand, tree, m.budget, origin, constants);

        std::vector<NodeId> kept;
        for (const auto& p : alloc.probes) kept.push_back(p.node);
        const ProbePlan final_plan = extract_signals(tree, kept);
        const std::string alloc_json = allocation_to_json(alloc, tree);
        const std::string config_material =
            "allocation:" + keys.probe_plan + ":" + std::to_string(rc.dump_ratio_pct) + ":" +
            to_string(rc.storage) + ":" + std::to_string(rc.hybrid_threshold) + ":" +
            constants.to_json();
        keys.allocation = store.store(ArtifactKind::Allocation, config_material, alloc_json);

        // Execution and reconstruction.
        const ProfiledRun profiled = run_profiled(m, tree, final_plan, alloc, rc.mode, rc.seed);
        const std::string trace_material = "trace:" + keys.allocation + ":" +
                                           to_string(rc.mode) + ":" + std::to_string(rc.seed);
        store.store(ArtifactKind::Trace, trace_material, trace_to_json(profiled.oracle, tree));

        const std::string out_dir =
            rc.out_dir.empty() ? fs::path(rc.manifest_path).stem().string() + ".run"
                               : rc.out_dir;
        write_text_file(out_dir + "/manifest_normalized.json", normalized);
        write_text_file(out_dir + "/hierarchy.json", hierarchy_json);
        write_text_file(out_dir + "/mapping.json", mapping_json);
        write_text_file(out_dir + "/mapping.csv", render_mapping_csv(mapping));
        write_text_file(out_dir + "/probe_plan.json", plan_json);
        write_text_file(out_dir + "/allocation.json", alloc_json);
        write_text_file(out_dir + "/oracle_trace.json", trace_to_json(profiled.oracle, tree));
        write_text_file(out_dir + "/timestamps.csv", profiled.log.to_csv());
        write_text_file(out_dir + "/timestamps.json", profiled.log.to_json());

        if (profiled.log.lossy) {
            // Surface the loss loudly; artifacts stay on disk for diagnosis.
            write_text_file(out_dir + "/LOSSY", "overflow during dump; log is incomplete\n");
            err << "error: run is lossy (queue overflow while a dump was in flight); "
                << profiled.log.lost.size() << " entries lost; see " << out_dir << "\n";
            return 3;
        }

        const ProfiledTrace recon = reconstruct(profiled.log, tree, alloc);
        ProfiledTrace primary = recon;
        primary.mode_label = to_string(rc.mode);
        primary.seed = rc.seed;
        write_text_file(out_dir + "/profiled_trace.json", primary.to_json());
        const std::string report_json = render_report_json(primary, mapping);
        store.store(ArtifactKind::Report, "report:" + trace_material, report_json);
        write_text_file(out_dir + "/report.json", report_json);
        write_text_file(out_dir + "/report.txt", render_table(primary, mapping));
        write_text_file(out_dir + "/gantt.svg", export_gantt(primary));
        write_text_file(out_dir + "/trace_events.json", profiled_trace_events(primary));

        // Three-stage comparison: static estimates, fixed-latency co-sim, and
        // the profiled hardware-model run.
        ProfiledTrace cosim_view =
            trace_to_profiled(run(m, tree, SimMode::Cosim, rc.seed), tree, "cosim", rc.seed);
        ProfiledTrace hw_view =
            rc.mode == SimMode::Hw
                ? primary
                : trace_to_profiled(run(m, tree, SimMode::Hw, rc.seed), tree, "hw", rc.seed);
        const CompareResult cmp = compare(csynth_by_path(tree), cosim_view, hw_view);
        write_text_file(out_dir + "/compare.json", cmp.to_json());
        write_text_file(out_dir + "/compare.txt", cmp.to_table());

        // Incremental bookkeeping.
        std::optional<StageKeys> prev;
        if (auto last = store.read_last_run()) prev = StageKeys::from_json(*last);
        if (prev) {
            const ReusePlan reuse = plan_incremental(prev, keys);
            out << "workspace reuse: " << reuse.reused.size() << "/5 stages ("
                << reuse.rebuilt.size() << " rebuilt)\n";
            std::ostringstream note;
            note << "reused " << reuse.reused.size() << "/5 build stages, rebuilt:";
            for (const auto& kind : reuse.rebuilt) note << " " << kind;
            note << "\n";
            store.write_note("last_reuse.txt", note.str());
        }
        store.write_last_run(keys.to_json());

        out << render_table(primary, mapping);
        out << "artifacts: " << out_dir << "\n";
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.exit_code();
    }
}

}  // namespace probeforge
