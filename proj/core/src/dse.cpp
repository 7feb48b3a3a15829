#include "probeforge/dse.hpp"

#include <algorithm>
#include <cstdio>

#include "json.hpp"
#include "probeforge/errors.hpp"

namespace probeforge {

using nlohmann::json;

std::string ProbeConfig::id() const {
    std::string out;
    switch (storage) {
        case StoragePolicy::AllRegister: out = "R"; break;
        case StoragePolicy::AllBram: out = "B"; break;
        case StoragePolicy::Hybrid: out = "H" + std::to_string(hybrid_threshold); break;
    }
    out += "-" + std::to_string(dump_ratio_pct);
    if (decode == CostConstants::DecodeVariant::Staged) out += "-s";
    if (counter_width != 0) out += "-w" + std::to_string(counter_width);
    return out;
}

std::vector<ProbeConfig> enumerate_configs(const DseOptions& opts) {
    std::vector<StoragePolicy> storages = opts.storages;
    if (opts.include_hybrid) storages.push_back(StoragePolicy::Hybrid);
    std::sort(storages.begin(), storages.end());
    storages.erase(std::unique(storages.begin(), storages.end()), storages.end());

    std::vector<std::uint32_t> ratios = opts.dump_ratios;
    std::sort(ratios.begin(), ratios.end());
    ratios.erase(std::unique(ratios.begin(), ratios.end()), ratios.end());
    for (std::uint32_t r : ratios) {
        if (r != 0 && r != 25 && r != 50 && r != 75) {
            throw_error(Errc::Validation, "dump ratio must be one of 0, 25, 50, 75");
        }
    }

    std::vector<ProbeConfig> configs;
    for (StoragePolicy storage : storages) {
        for (std::uint32_t ratio : ratios) {
            ProbeConfig cfg;
            cfg.storage = storage;
            cfg.hybrid_threshold = opts.hybrid_threshold;
            cfg.dump_ratio_pct = ratio;
            cfg.decode = opts.decode;
            cfg.counter_width = opts.counter_width;
            configs.push_back(cfg);
        }
    }
    return configs;
}

DsePoint evaluate(const ProbeConfig& cfg, const DesignManifest& m, const HierarchyTree& tree,
                  const ProbePlan& plan, std::uint64_t seed, const CostConstants& k) {
    RollupResult rollup = static_latency_rollup(m);
    AllocConfig alloc_cfg;
    alloc_cfg.dump_ratio_pct = cfg.dump_ratio_pct;
    CounterAllocation demand = allocate_counters(plan, tree, rollup, alloc_cfg);
    if (cfg.counter_width != 0) demand.counter_width = cfg.counter_width;
    for (auto& p : demand.probes) {
        switch (cfg.storage) {
            case StoragePolicy::AllRegister: p.storage = StorageTag::Register; break;
            case StoragePolicy::AllBram: p.storage = StorageTag::Bram; break;
            case StoragePolicy::Hybrid:
                p.storage = p.depth > cfg.hybrid_threshold ? StorageTag::Bram
                                                           : StorageTag::Register;
                break;
        }
    }

    CostConstants constants = k;
    constants.decode_variant = cfg.decode;

    const ResourceEstimate origin = origin_usage(m);
    CounterAllocation adapted = adapt_allocation(demand, tree, m.budget, origin, constants);

    std::vector<NodeId> kept;
    for (const auto& p : adapted.probes) kept.push_back(p.node);
    ProbePlan adapted_plan = extract_signals(tree, kept);

    const ExecutionTrace baseline = run(m, tree, SimMode::Hw, seed);
    const ProfiledRun profiled =
        run_profiled(m, tree, adapted_plan, adapted, SimMode::Hw, seed);

    const ResourceEstimate est =
        estimate_resources(allocation_shapes(adapted), adapted.counter_width, constants);

    DsePoint point;
    point.config_id = cfg.id();
    point.r_util = delta_r_util(est, origin, m.budget);
    point.lossy = profiled.log.lossy;

    // Both bandwidth figures are normalized over the unprofiled execution
    // window, so the ratio reduces to dump bytes over kernel bytes.
    const double b0 = baseline_bandwidth_gbps(m, baseline);
    const double bip = profiling_bandwidth_gbps(profiled.dram_traffic_bytes,
                                                baseline.total_cycles, m.cycle_seconds());
    if (b0 > 0) {
        point.b_dram = bip / b0;
    } else {
        point.b_dram = bip;
        point.b_dram_absolute = true;
    }

    point.f_max = fmax_model(origin + est, m.budget, m.clock_mhz);

    if (baseline.total_cycles > 0 && point.f_max > 0) {
        const double profiled_time = static_cast<double>(profiled.wall_cycles) / point.f_max;
        const double baseline_time =
            static_cast<double>(baseline.total_cycles) / m.clock_mhz;
        point.latency_overhead = profiled_time / baseline_time - 1.0;
    }
    return point;
}

namespace {

bool dominates(const DsePoint& q, const DsePoint& p) {
    const bool no_worse =
        q.r_util <= p.r_util && q.b_dram <= p.b_dram && q.f_max >= p.f_max;
    const bool strictly_better =
        q.r_util < p.r_util || q.b_dram < p.b_dram || q.f_max > p.f_max;
    return no_worse && strictly_better;
}

}  // namespace

std::vector<DsePoint> pareto_frontier(const std::vector<DsePoint>& points) {
    std::vector<DsePoint> frontier;
    for (const DsePoint& p : points) {
        bool dominated = false;
        for (const DsePoint& q : points) {
            if (dominates(q, p)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) frontier.push_back(p);
    }
    std::sort(frontier.begin(), frontier.end(), [](const DsePoint& a, const DsePoint& b) {
        if (a.r_util != b.r_util) return a.r_util < b.r_util;
        if (a.b_dram != b.b_dram) return a.b_dram < b.b_dram;
        if (a.f_max != b.f_max) return a.f_max > b.f_max;
        return a.config_id < b.config_id;
    });
    return frontier;
}

DseResult run_dse(const DesignManifest& m, const HierarchyTree& tree, const ProbePlan& plan,
                  std::uint64_t seed, const DseOptions& opts, const CostConstants& k) {
    DseResult result;
    for (const ProbeConfig& cfg : enumerate_configs(opts)) {
        result.points.push_back(evaluate(cfg, m, tree, plan, seed, k));
    }
    auto frontier = pareto_frontier(result.points);
    for (DsePoint& p : result.points) {
        p.on_frontier = std::any_of(frontier.begin(), frontier.end(), [&](const DsePoint& f) {
            return f.config_id == p.config_id;
        });
    }
    return result;
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string DseResult::to_csv() const {
    std::string out = "config,r_util,b_dram,f_max,latency_overhead,on_frontier\n";
    for (const DsePoint& p : points) {
        out += p.config_id + "," + fmt_double(p.r_util) + "," + fmt_double(p.b_dram) + "," +
               fmt_double(p.f_max) + "," + fmt_double(p.latency_overhead) + "," +
               (p.on_frontier ? "1" : "0") + "\n";
    }
    return out;
}

std::string DseResult::to_scatter_json() const {
    json doc;
    json pts = json::array();
    for (const DsePoint& p : points) {
        pts.push_back({
            {"config", p.config_id},
            {"r_util", p.r_util},
            {"b_dram", p.b_dram},
            {"b_dram_absolute", p.b_dram_absolute},
            {"f_max", p.f_max},
            {"latency_overhead", p.latency_overhead},
            {"lossy", p.lossy},
            {"on_frontier", p.on_frontier},
        });
    }
    doc["points"] = std::move(pts);
    doc["axes"] = {{"x", "r_util"}, {"y", "b_dram"}, {"z", "f_max"}};
    return doc.dump(2) + "\n";
}

const char* to_string(StoragePolicy s) {
    switch (s) {
        case StoragePolicy::AllRegister: return "register";
        case StoragePolicy::AllBram: return "bram";
        case StoragePolicy::Hybrid: return "hybrid";
    }
    return "register";
}

}  // namespace probeforge
