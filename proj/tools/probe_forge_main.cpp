// probe-forge command-line front end: check, map, instrument, estimate,
// profile, dse, report, status.

#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "probeforge/errors.hpp"
#include "probeforge/pipeline.hpp"
#include "probeforge/report.hpp"

namespace pf = probeforge;
namespace fs = std::filesystem;

namespace {

pf::InliningPolicy parse_policy(const std::string& s) {
    if (s == "default") return pf::InliningPolicy::InlineDefault;
    if (s == "off-all") return pf::InliningPolicy::InlineOffAll;
    if (s == "off-top") return pf::InliningPolicy::InlineOffTop;
    pf::throw_error(pf::Errc::Validation, "policy must be default|off-all|off-top");
}

pf::StoragePolicy parse_storage(const std::string& s) {
    if (s == "reg") return pf::StoragePolicy::AllRegister;
    if (s == "bram") return pf::StoragePolicy::AllBram;
    if (s == "hybrid") return pf::StoragePolicy::Hybrid;
    pf::throw_error(pf::Errc::Validation, "storage must be reg|bram|hybrid");
}

pf::DesignManifest load_manifest(const std::string& path, pf::InliningPolicy policy) {
    if (!fs::exists(path)) {
        pf::throw_error(pf::Errc::Io, "manifest not found: " + path);
    }
    return apply_inlining(pf::parse_manifest(pf::read_text_file(path)), policy);
}

struct CommonFlags {
    std::string policy = "default";
    std::string mode = "hw";
    std::uint64_t seed = 0;
    std::string storage = "reg";
    std::uint32_t hybrid_threshold = 8;
    std::uint32_t dump_ratio = 0;
    std::string workspace;
    std::string constants;
};

void add_policy_flag(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--policy", flags.policy, "Inlining policy: default|off-all|off-top")
        ->check(CLI::IsMember({"default", "off-all", "off-top"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"probe-forge: profiling instrumentation and cycle-accurate simulation for "
                 "hierarchical kernel manifests"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string manifest_path;
    std::string target;
    bool all_targets = false;
    std::string format = "table";
    std::size_t top = 0;
    std::string out_dir;
    std::string run_dir;

    auto* check = app.add_subcommand("check", "Parse and validate a manifest");
    check->add_option("manifest", manifest_path)->required();

    auto* map_cmd = app.add_subcommand("map", "Print the source-to-RTL mapping table");
    map_cmd->add_option("manifest", manifest_path)->required();
    map_cmd->add_option("--format", format, "table|csv")
        ->check(CLI::IsMember({"table", "csv"}));
    add_policy_flag(map_cmd, flags);

    auto* instrument =
        app.add_subcommand("instrument", "Write probe_plan.json and allocation.json");
    instrument->add_option("manifest", manifest_path)->required();
    instrument->add_option("--target", target, "Profile the subtree at this source path");
    instrument->add_flag("--all", all_targets, "Probe every node (default)");
    instrument->add_option("--out", out_dir, "Output directory (default .)");
    instrument->add_option("--dump-ratio", flags.dump_ratio)->check(CLI::IsMember({0, 25, 50, 75}));
    add_policy_flag(instrument, flags);

    auto* estimate = app.add_subcommand("estimate", "Resource estimate and relative overhead");
    estimate->add_option("manifest", manifest_path)->required();
    std::string plan_path;
    estimate->add_option("--plan", plan_path, "probe_plan.json (defaults to all nodes)");
    estimate->add_option("--constants", flags.constants, "Cost-constant JSON file");
    estimate->add_option("--storage", flags.storage)->check(CLI::IsMember({"reg", "bram", "hybrid"}));
    estimate->add_option("--dump-ratio", flags.dump_ratio)->check(CLI::IsMember({0, 25, 50, 75}));
    add_policy_flag(estimate, flags);

    auto* profile = app.add_subcommand("profile", "Run the full pipeline on a manifest");
    profile->add_option("manifest", manifest_path)->required();
    profile->add_option("--target", target);
    profile->add_option("--mode", flags.mode)->check(CLI::IsMember({"cosim", "hw"}));
    profile->add_option("--seed", flags.seed);
    profile->add_option("--storage", flags.storage)->check(CLI::IsMember({"reg", "bram", "hybrid"}));
    profile->add_option("--dump-ratio", flags.dump_ratio)->check(CLI::IsMember({0, 25, 50, 75}));
    profile->add_option("--workspace", flags.workspace, "Workspace dir (or $PROBE_FORGE_WORKSPACE)");
    profile->add_option("--constants", flags.constants);
    profile->add_option("--out", out_dir, "Run output directory");
    add_policy_flag(profile, flags);

    auto* dse = app.add_subcommand("dse", "Explore storage/dump-ratio configurations");
    dse->add_option("manifest", manifest_path)->required();
    dse->add_option("--seed", flags.seed);
    bool with_hybrid = false;
    dse->add_flag("--hybrid", with_hybrid, "Include hybrid storage configs");
    dse->add_option("--hybrid-threshold", flags.hybrid_threshold);
    dse->add_option("--constants", flags.constants);
    dse->add_option("--out", out_dir, "Output directory (default .)");
    add_policy_flag(dse, flags);

    auto* report = app.add_subcommand("report", "Render a finished run directory");
    report->add_option("run_dir", run_dir)->required();
    report->add_option("--format", format, "table|csv|json|svg|trace-events")
        ->check(CLI::IsMember({"table", "csv", "json", "svg", "trace-events"}));
    report->add_option("--top", top, "Keep only the top-K paths by total cycles");

    auto* status = app.add_subcommand("status", "List workspace artifacts and reuse stats");
    status->add_option("--workspace", flags.workspace);

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) {
            if (!fs::exists(manifest_path)) {
                std::cerr << "error: manifest not found: " << manifest_path << "\n";
                return 1;
            }
            const pf::DesignManifest m = pf::parse_manifest(pf::read_text_file(manifest_path));
            auto pragma = m.pragma_function();
            std::cout << "ok: " << m.name << ", " << m.functions.size() << " functions, top="
                      << m.top << ", pragma="
                      << (pragma ? *pragma : std::string("<none: nothing to profile>")) << "\n";
            return 0;
        }

        if (map_cmd->parsed()) {
            const auto m = load_manifest(manifest_path, parse_policy(flags.policy));
            const auto mapping = pf::build_mapping(pf::build_hierarchy(m));
            std::cout << (format == "csv" ? pf::render_mapping_csv(mapping)
                                          : pf::render_mapping_table(mapping));
            return 0;
        }

        if (instrument->parsed()) {
            const auto m = load_manifest(manifest_path, parse_policy(flags.policy));
            const auto tree = pf::build_hierarchy(m);
            std::vector<pf::NodeId> targets = target.empty()
                                                  ? tree.preorder()
                                                  : tree.subtree(pf::locate(tree, target));
            const auto plan = pf::extract_signals(tree, targets);
            pf::AllocConfig cfg;
            cfg.dump_ratio_pct = flags.dump_ratio;
            const auto alloc =
                pf::allocate_counters(plan, tree, pf::static_latency_rollup(m), cfg);
            const std::string dir = out_dir.empty() ? "." : out_dir;
            pf::write_text_file(dir + "/probe_plan.json", pf::probe_plan_to_json(plan, tree));
            pf::write_text_file(dir + "/allocation.json", pf::allocation_to_json(alloc, tree));
            std::cout << "wrote " << dir << "/probe_plan.json and " << dir
                      << "/allocation.json (" << plan.probes.size() << " probes"
                      << (alloc.cap_exceeded ? ", over module cap; adapt will trim" : "")
                      << ")\n";
            return 0;
        }

        if (estimate->parsed()) {
            const auto m = load_manifest(manifest_path, parse_policy(flags.policy));
            const auto tree = pf::build_hierarchy(m);
            pf::ProbePlan plan;
            if (!plan_path.empty()) {
                // The plan artifact stores source paths; resolve them back.
                const auto doc = nlohmann::json::parse(pf::read_text_file(plan_path));
                std::vector<pf::NodeId> nodes;
                for (const auto& probe : doc.at("probes")) {
                    nodes.push_back(
                        pf::locate(tree, probe.at("node").get<std::string>()));
                }
                plan = pf::extract_signals(tree, nodes);
            } else {
                plan = pf::extract_signals(tree, tree.preorder());
            }
            pf::AllocConfig cfg;
            cfg.dump_ratio_pct = flags.dump_ratio;
            auto alloc = pf::allocate_counters(plan, tree, pf::static_latency_rollup(m), cfg);
            const pf::StoragePolicy storage = parse_storage(flags.storage);
            for (auto& p : alloc.probes) {
                p.storage = storage == pf::StoragePolicy::AllBram ? pf::StorageTag::Bram
                            : storage == pf::StoragePolicy::Hybrid && p.depth > flags.hybrid_threshold
                                ? pf::StorageTag::Bram
                                : pf::StorageTag::Register;
            }
            const auto k = pf::load_constants(
                flags.constants.empty() ? std::nullopt
                                        : std::optional<std::string>(flags.constants));
            const auto est = pf::estimate_resources(pf::allocation_shapes(alloc),
                                                    alloc.counter_width, k);
            const auto origin = pf::origin_usage(m);
            const double r_util = pf::delta_r_util(est, origin, m.budget);
            std::cout << "probes       " << alloc.probes.size() << "\n"
                      << "lut          " << est.lut << "\n"
                      << "ff           " << est.ff << "\n"
                      << "bram_blocks  " << est.bram_blocks << "\n"
                      << "delta_r_util " << r_util << "\n";
            nlohmann::json doc;
            doc["probes"] = alloc.probes.size();
            doc["lut"] = est.lut;
            doc["ff"] = est.ff;
            doc["bram_blocks"] = est.bram_blocks;
            doc["delta_r_util"] = r_util;
            std::cout << doc.dump(2) << "\n";
            return 0;
        }

        if (profile->parsed()) {
            pf::RunConfig rc;
            rc.manifest_path = manifest_path;
            if (!target.empty()) rc.target = target;
            rc.policy = parse_policy(flags.policy);
            rc.mode = pf::sim_mode_from_string(flags.mode);
            rc.seed = flags.seed;
            rc.storage = parse_storage(flags.storage);
            rc.hybrid_threshold = flags.hybrid_threshold;
            rc.dump_ratio_pct = flags.dump_ratio;
            rc.workspace_dir = flags.workspace;
            rc.out_dir = out_dir;
            if (!flags.constants.empty()) rc.constants_path = flags.constants;
            return pf::run_pipeline(rc, std::cout, std::cerr);
        }

        if (dse->parsed()) {
            const auto m = load_manifest(manifest_path, parse_policy(flags.policy));
            const auto tree = pf::build_hierarchy(m);
            const auto plan = pf::extract_signals(tree, tree.preorder());
            pf::DseOptions opts;
            opts.include_hybrid = with_hybrid;
            opts.hybrid_threshold = flags.hybrid_threshold;
            const auto k = pf::load_constants(
                flags.constants.empty() ? std::nullopt
                                        : std::optional<std::string>(flags.constants));
            const auto result = pf::run_dse(m, tree, plan, flags.seed, opts, k);
            const std::string dir = out_dir.empty() ? "." : out_dir;
            pf::write_text_file(dir + "/dse_points.csv", result.to_csv());
            pf::write_text_file(dir + "/dse_scatter.json", result.to_scatter_json());
            std::cout << result.to_csv();
            std::cout << "wrote " << dir << "/dse_points.csv and " << dir
                      << "/dse_scatter.json\n";
            return 0;
        }

        if (report->parsed()) {
            const auto trace =
                pf::ProfiledTrace::from_json(pf::read_text_file(run_dir + "/profiled_trace.json"));
            pf::MappingTable mapping;
            const auto doc = nlohmann::json::parse(pf::read_text_file(run_dir + "/mapping.json"));
            for (const auto& row : doc.at("entries")) {
                mapping.entries.push_back(
                    {row.at("source_path").get<std::string>(),
                     row.at("rtl_name").get<std::string>(),
                     row.at("kind").get<std::string>() == "loop_instance"
                         ? pf::HierKind::LoopInstance
                         : pf::HierKind::FunctionInstance});
            }
            if (format == "csv") {
                std::cout << pf::render_report_csv(trace, mapping);
            } else if (format == "json") {
                std::cout << pf::render_report_json(trace, mapping);
            } else if (format == "svg") {
                std::cout << pf::export_gantt(trace, top);
            } else if (format == "trace-events") {
                std::cout << pf::profiled_trace_events(trace);
            } else {
                std::cout << pf::render_table(trace, mapping, top);
            }
            return 0;
        }

        if (status->parsed()) {
            pf::ArtifactStore store(pf::resolve_workspace_dir(flags.workspace));
            const auto entries = store.list();
            std::cout << "workspace: " << store.dir().string() << " (" << entries.size()
                      << " artifacts)\n";
            for (const auto& e : entries) {
                std::cout << "  " << e.kind << "  " << e.key.substr(0, 16) << "...\n";
            }
            if (auto reuse = store.read_note("last_reuse.txt")) {
                std::cout << "last run " << *reuse;
            }
            if (auto last = store.read_last_run()) {
                std::cout << "last run stage keys:\n" << *last;
            } else {
                std::cout << "no runs recorded yet\n";
            }
            return 0;
        }
    } catch (const pf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
