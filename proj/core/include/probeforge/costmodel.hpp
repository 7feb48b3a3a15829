#pragma once
// Analytical resource/bandwidth/frequency models and the adaptive allocation
// loop that fits the probe network into the board budget.

#include <cstdint>
#include <string>
#include <vector>

#include "probeforge/instrument.hpp"
#include "probeforge/manifest.hpp"
#include "probeforge/simkernel.hpp"

namespace probeforge {

struct CostConstants {
    enum class DecodeVariant { Monolithic, Staged };

    std::uint64_t c_axi = 400;    // AXI interface fixed cost
    std::uint64_t c_pc = 80;      // global counter logic
    std::uint64_t c_decode = 16;  // readback mux, scales with module count
    std::uint64_t c_l1 = 12;      // per-counter fixed LUT cost
    std::uint64_t c_l2 = 3;       // per-slot LUT cost
    std::uint64_t c_f1 = 20;      // per-counter fixed FF cost
    std::uint64_t c_f2 = 8;       // per-slot FF cost
    DecodeVariant decode_variant = DecodeVariant::Monolithic;

    std::string to_json() const;
    static CostConstants from_json(const std::string& text);
};

struct ResourceEstimate {
    std::uint64_t lut = 0;
    std::uint64_t ff = 0;
    std::uint64_t bram_blocks = 0;

    ResourceEstimate operator+(const ResourceEstimate& o) const {
        return {lut + o.lut, ff + o.ff, bram_blocks + o.bram_blocks};
    }
    bool operator==(const ResourceEstimate&) const = default;
};

struct ProbeShape {
    std::uint32_t depth = 2;  // on-chip slots (effective depth)
    StorageTag storage = StorageTag::Register;
};

std::uint32_t ceil_log2(std::uint64_t n);  // 0 for n <= 1

/// Per-counter fixed plus depth-proportional costs on top of the shared
/// AXI/counter/decode logic. BRAM-tagged probes keep the fixed term but store
/// slots in 18-kbit blocks instead of registers. The staged decode variant
/// replaces the monolithic mux's ceil(log2 N) factor with ceil(log8 N).
ResourceEstimate estimate_resources(const std::vector<ProbeShape>& probes,
                                    std::uint32_t counter_width, const CostConstants& k);

std::vector<ProbeShape> allocation_shapes(const CounterAllocation& alloc);

struct ResourceWeights {
    double lut = 1.0 / 3;
    double ff = 1.0 / 3;
    double bram = 1.0 / 3;
};

/// Weighted relative overhead sum(w_i * est_i / origin_i); a zero origin falls
/// back to the board budget. Throws Error{DegenerateBaseline} when a weighted
/// resource has neither.
double delta_r_util(const ResourceEstimate& est, const ResourceEstimate& origin,
                    const ResourceBudget& budget, const ResourceWeights& weights = {});

/// Kernel DRAM bandwidth in decimal GB/s over the traced execution window.
double baseline_bandwidth_gbps(const DesignManifest& m, const ExecutionTrace& trace);

/// Profiling-traffic bandwidth in decimal GB/s.
double profiling_bandwidth_gbps(std::uint64_t s_dram_bytes, std::uint64_t t_total_cycles,
                                double t_cycle_seconds);

/// Worst-case profiling traffic with N modules toggling every K cycles,
/// f * N * entry_bits / (8K) bytes per second.
double worst_case_bandwidth_bytes_per_sec(std::uint64_t n_modules, double k_cycles,
                                          std::uint32_t entry_bits, double f_hz);

/// Same quantity in the published convention (KB = 1024 B, GB = 10^6 KB),
/// which makes depth 64 x 64-bit at 100 MHz come out as 0.78 * N/K.
double worst_case_bandwidth_gbps(std::uint64_t n_modules, double k_cycles, std::uint32_t depth,
                                 std::uint32_t entry_bits, double f_hz);

struct FmaxParams {
    double beta = 0.5;
    double u_threshold = 0.7;
};

/// Timing stand-in: F_target scaled down once peak utilization passes the
/// congestion threshold. Non-increasing in every usage component.
double fmax_model(const ResourceEstimate& total_usage, const ResourceBudget& budget,
                  double f_target_mhz, const FmaxParams& params = {});

/// Structural stand-in for the original design's own resource usage.
ResourceEstimate origin_usage(const DesignManifest& m);

/// Fit the demanded allocation into budget - origin: trim to the module cap,
/// retag the deepest queues to BRAM while BRAM lasts, drop probes
/// deepest-in-tree first (pragma root and its direct children last), then
/// shrink depths toward 2. Never increases a depth. Throws Error{Unfittable}
/// when even a lone root probe at depth 2 cannot fit.
CounterAllocation adapt_allocation(const CounterAllocation& demand, const HierarchyTree& tree,
                                   const ResourceBudget& budget, const ResourceEstimate& origin,
                                   const CostConstants& k);

const char* to_string(CostConstants::DecodeVariant v);

}  // namespace probeforge
