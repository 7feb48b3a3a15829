#pragma once
// Design-space exploration over storage policy x dump ratio, producing the
// (resource, bandwidth, frequency) triple per configuration and the Pareto
// frontier.

#include <cstdint>
#include <string>
#include <vector>

#include "probeforge/costmodel.hpp"

namespace probeforge {

enum class StoragePolicy { AllRegister, AllBram, Hybrid };

struct ProbeConfig {
    StoragePolicy storage = StoragePolicy::AllRegister;
    std::uint32_t hybrid_threshold = 8;  // depths above this go to BRAM
    std::uint32_t dump_ratio_pct = 0;    // 0, 25, 50, 75
    CostConstants::DecodeVariant decode = CostConstants::DecodeVariant::Monolithic;
    std::uint32_t counter_width = 0;  // 0 = take the allocation's width

    std::string id() const;  // "R-25", "B-50", "H8-0", ...
};

struct DseOptions {
    std::vector<StoragePolicy> storages = {StoragePolicy::AllRegister, StoragePolicy::AllBram};
    bool include_hybrid = false;
    std::uint32_t hybrid_threshold = 8;
    std::vector<std::uint32_t> dump_ratios = {0, 25, 50, 75};
    CostConstants::DecodeVariant decode = CostConstants::DecodeVariant::Monolithic;
    std::uint32_t counter_width = 0;
};

/// The finite configuration grid in canonical (storage, dump_ratio, decode,
/// width) order. Defaults: {register, bram} x {0,25,50,75} = 8 configs.
std::vector<ProbeConfig> enumerate_configs(const DseOptions& opts);

struct DsePoint {
    std::string config_id;
    double r_util = 0;
    double b_dram = 0;  // fraction of the kernel's own bandwidth (see flag)
    double f_max = 0;   // MHz
    double latency_overhead = 0;
    bool b_dram_absolute = false;  // kernel moved no data; b_dram is GB/s
    bool lossy = false;
    bool on_frontier = false;
};

/// Evaluate one configuration: adapt the allocation under it, execute the
/// profiled hw run, and derive the metric triple. Propagates
/// Error{Unfittable}.
DsePoint evaluate(const ProbeConfig& cfg, const DesignManifest& m, const HierarchyTree& tree,
                  const ProbePlan& plan, std::uint64_t seed, const CostConstants& k);

/// Non-dominated subset: q dominates p when q is no worse on r_util and
/// b_dram, no slower on f_max, and strictly better somewhere. Ordered by
/// (r_util, b_dram, -f_max, config id).
std::vector<DsePoint> pareto_frontier(const std::vector<DsePoint>& points);

struct DseResult {
    std::vector<DsePoint> points;  // frontier membership filled in

    std::string to_csv() const;           // config,r_util,b_dram,f_max,...
    std::string to_scatter_json() const;  // plot-ready point list
};

DseResult run_dse(const DesignManifest& m, const HierarchyTree& tree, const ProbePlan& plan,
                  std::uint64_t seed, const DseOptions& opts, const CostConstants& k);

const char* to_string(StoragePolicy s);

}  // namespace probeforge
