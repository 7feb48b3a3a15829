#include "probeforge/costmodel.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "probeforge/errors.hpp"

namespace probeforge {

using nlohmann::json;

namespace {
constexpr std::uint64_t kBramBitsPerBlock = 18 * 1024;  // 18-kbit primitives
}

std::uint32_t ceil_log2(std::uint64_t n) {
    if (n <= 1) return 0;
    std::uint32_t bits = 0;
    std::uint64_t v = n - 1;
    while (v) {
        ++bits;
        v >>= 1;
    }
    return bits;
}

namespace {

std::uint64_t decode_cost(std::uint64_t n, const CostConstants& k) {
    if (n == 0) return 0;
    const std::uint32_t log2n = ceil_log2(n);
    if (k.decode_variant == CostConstants::DecodeVariant::Staged) {
        // ceil(log8 N) levels of an 8-way staged mux.
        return k.c_decode * ((log2n + 2) / 3);
    }
    return k.c_decode * log2n;
}

}  // namespace

ResourceEstimate estimate_resources(const std::vector<ProbeShape>& probes,
                                    std::uint32_t counter_width, const CostConstants& k) {
    ResourceEstimate est;
    est.lut = k.c_axi + k.c_pc + decode_cost(probes.size(), k);
    est.ff = k.c_axi + k.c_pc + decode_cost(probes.size(), k);

    std::uint64_t bram_bits = 0;
    for (const ProbeShape& p : probes) {
        est.lut += k.c_l1;
        est.ff += k.c_f1;
        if (p.storage == StorageTag::Register) {
            est.lut += k.c_l2 * p.depth;
            est.ff += k.c_f2 * p.depth;
        } else {
            bram_bits += static_cast<std::uint64_t>(p.depth) * counter_width;
        }
    }
    est.bram_blocks = (bram_bits + kBramBitsPerBlock - 1) / kBramBitsPerBlock;
    return est;
}

std::vector<ProbeShape> allocation_shapes(const CounterAllocation& alloc) {
    std::vector<ProbeShape> shapes;
    shapes.reserve(alloc.probes.size());
    for (std::size_t i = 0; i < alloc.probes.size(); ++i) {
        shapes.push_back({alloc.effective_depth(i), alloc.probes[i].storage});
    }
    return shapes;
}

double delta_r_util(const ResourceEstimate& est, const ResourceEstimate& origin,
                    const ResourceBudget& budget, const ResourceWeights& weights) {
    struct Axis {
        double weight;
        std::uint64_t used;
        std::uint64_t orig;
        std::uint64_t cap;
        const char* name;
    };
    const Axis axes[] = {
        {weights.lut, est.lut, origin.lut, budget.lut, "lut"},
        {weights.ff, est.ff, origin.ff, budget.ff, "ff"},
        {weights.bram, est.bram_blocks, origin.bram_blocks, budget.bram_blocks, "bram"},
    };
    double sum = 0;
    for (const Axis& a : axes) {
        if (a.weight == 0) continue;
        const std::uint64_t denom = a.orig > 0 ? a.orig : a.cap;
        if (denom == 0) {
            throw_error(Errc::DegenerateBaseline,
                        std::string("resource ratio for ") + a.name +
                            " has neither an original usage nor a board budget");
        }
        sum += a.weight * static_cast<double>(a.used) / static_cast<double>(denom);
    }
    return sum;
}

double baseline_bandwidth_gbps(const DesignManifest& m, const ExecutionTrace& trace) {
    const std::uint64_t bytes = trace.total_dram_bytes();
    if (bytes == 0 || trace.total_cycles == 0) return 0;
    const double seconds = static_cast<double>(trace.total_cycles) * m.cycle_seconds();
    return static_cast<double>(bytes) / seconds / 1e9;
}

double profiling_bandwidth_gbps(std::uint64_t s_dram_bytes, std::uint64_t t_total_cycles,
                                double t_cycle_seconds) {
    if (s_dram_bytes == 0 || t_total_cycles == 0) return 0;
    const double seconds = static_cast<double>(t_total_cycles) * t_cycle_seconds;
    return static_cast<double>(s_dram_bytes) / seconds / 1e9;
}

double worst_case_bandwidth_bytes_per_sec(std::uint64_t n_modules, double k_cycles,
                                          std::uint32_t entry_bits, double f_hz) {
    return f_hz * static_cast<double>(n_modules) * static_cast<double>(entry_bits) /
           (8.0 * k_cycles);
}

double worst_case_bandwidth_gbps(std::uint64_t n_modules, double k_cycles, std::uint32_t depth,
                                 std::uint32_t entry_bits, double f_hz) {
    const double dumps_per_sec = f_hz / (static_cast<double>(depth) * k_cycles);
    const double kb_per_dump =
        static_cast<double>(depth) * (static_cast<double>(entry_bits) / 8.0) / 1024.0;
    return dumps_per_sec * static_cast<double>(n_modules) * kb_per_dump / 1e6;
}

double fmax_model(const ResourceEstimate& total_usage, const ResourceBudget& budget,
                  double f_target_mhz, const FmaxParams& params) {
    auto util = [](std::uint64_t used, std::uint64_t cap) {
        if (cap == 0) return used == 0 ? 0.0 : 2.0;
        return static_cast<double>(used) / static_cast<double>(cap);
    };
    const double peak = std::max({util(total_usage.lut, budget.lut),
                                  util(total_usage.ff, budget.ff),
                                  util(total_usage.bram_blocks, budget.bram_blocks)});
    const double derate = params.beta * std::max(0.0, peak - params.u_threshold);
    return std::max(f_target_mhz * (1.0 - derate), 0.05 * f_target_mhz);
}

namespace {

struct OriginScan {
    ResourceEstimate usage;

    void scan(const Body& body) {
        for (const auto& n : body) {
            if (const auto* c = std::get_if<Compute>(&n.node)) {
                usage.lut += 32 + 2 * ceil_log2(c->cycles + 1);
                usage.ff += 48 + ceil_log2(c->cycles + 1);
            } else if (const auto* d = std::get_if<DramAccess>(&n.node)) {
                usage.lut += 220;
                usage.ff += 180;
                usage.bram_blocks += d->burst_bytes * 8 / kBramBitsPerBlock;
            } else if (std::holds_alternative<Call>(n.node)) {
                usage.lut += 12;
                usage.ff += 8;
            } else if (const auto* loop = std::get_if<Loop>(&n.node)) {
                usage.lut += 40;
                usage.ff += 24;
                scan(loop->body);
            } else if (const auto* p = std::get_if<Parallel>(&n.node)) {
                for (const auto& branch : p->branches) scan(branch);
            }
        }
    }
};

}  // namespace

ResourceEstimate origin_usage(const DesignManifest& m) {
    OriginScan scan;
    for (const auto& [name, fn] : m.functions) {
        scan.usage.lut += 150;
        scan.usage.ff += 80;
        scan.scan(fn.body);
    }
    return scan.usage;
}

namespace {

struct AvailableBudget {
    std::uint64_t lut, ff, bram;

    bool fits(const ResourceEstimate& est) const {
        return est.lut <= lut && est.ff <= ff && est.bram_blocks <= bram;
    }
};

ResourceEstimate estimate_allocation(const CounterAllocation& alloc, const CostConstants& k) {
    return estimate_resources(allocation_shapes(alloc), alloc.counter_width, k);
}

// Probe indices ordered for removal: deepest in the tree first, later probes
// before earlier ones at equal depth.
std::vector<std::size_t> drop_order(const CounterAllocation& alloc, const HierarchyTree& tree,
                                    bool include_protected) {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < alloc.probes.size(); ++i) {
        const HierNode& n = tree.node(alloc.probes[i].node);
        const bool is_protected =
            alloc.probes[i].node == tree.root ||
            (n.parent && *n.parent == tree.root && n.depth == 1);
        if (is_protected && !include_protected) continue;
        if (alloc.probes[i].node == tree.root) continue;  // the root is never dropped
        order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto da = tree.node(alloc.probes[a].node).depth;
        const auto db = tree.node(alloc.probes[b].node).depth;
        if (da != db) return da > db;
        return a > b;
    });
    return order;
}

void drop_probe(CounterAllocation& alloc, std::size_t index) {
    alloc.probes.erase(alloc.probes.begin() + static_cast<std::ptrdiff_t>(index));
}

}  // namespace

CounterAllocation adapt_allocation(const CounterAllocation& demand, const HierarchyTree& tree,
                                   const ResourceBudget& budget, const ResourceEstimate& origin,
                                   const CostConstants& k) {
    const AvailableBudget avail{
        budget.lut > origin.lut ? budget.lut - origin.lut : 0,
        budget.ff > origin.ff ? budget.ff - origin.ff : 0,
        budget.bram_blocks > origin.bram_blocks ? budget.bram_blocks - origin.bram_blocks : 0,
    };

    CounterAllocation alloc = demand;

    // Enforce the module cap before any budget arithmetic.
    while (alloc.probes.size() > alloc.module_cap) {
        auto order = drop_order(alloc, tree, /*include_protected=*/false);
        if (order.empty()) break;  // only protected probes left; keep them
        drop_probe(alloc, order.front());
    }
    alloc.cap_exceeded = alloc.probes.size() > alloc.module_cap;

    auto fits = [&]() { return avail.fits(estimate_allocation(alloc, k)); };
    if (fits()) return alloc;

    // Retag the deepest register queues to BRAM while BRAM space lasts.
    while (!fits()) {
        std::size_t best = alloc.probes.size();
        std::uint32_t best_depth = 0;
        for (std::size_t i = 0; i < alloc.probes.size(); ++i) {
            if (alloc.probes[i].storage != StorageTag::Register) continue;
            if (best == alloc.probes.size() || alloc.probes[i].depth >= best_depth) {
                best = i;
                best_depth = alloc.probes[i].depth;
            }
        }
        if (best == alloc.probes.size()) break;
        CounterAllocation trial = alloc;
        trial.probes[best].storage = StorageTag::Bram;
        if (estimate_allocation(trial, k).bram_blocks > avail.bram) break;
        alloc = trial;
    }
    if (fits()) return alloc;

    // Drop probes deepest-in-tree first, keeping the root and its children.
    while (!fits()) {
        auto order = drop_order(alloc, tree, /*include_protected=*/false);
        if (order.empty()) break;
        drop_probe(alloc, order.front());
    }
    if (fits()) return alloc;

    // Shrink the deepest queues toward the 2-slot minimum.
    while (!fits()) {
        std::size_t best = alloc.probes.size();
        std::uint32_t best_depth = 2;
        for (std::size_t i = 0; i < alloc.probes.size(); ++i) {
            if (alloc.probes[i].depth > best_depth) {
                best = i;
                best_depth = alloc.probes[i].depth;
            }
        }
        if (best == alloc.probes.size()) break;
        alloc.probes[best].depth = std::max<std::uint32_t>(2, alloc.probes[best].depth / 2);
    }
    if (fits()) return alloc;

    // Last resort: give up the direct children too, then try the lone root in
    // either storage flavor.
    while (!fits()) {
        auto order = drop_order(alloc, tree, /*include_protected=*/true);
        if (order.empty()) break;
        drop_probe(alloc, order.front());
    }
    if (fits()) return alloc;

    for (auto storage : {StorageTag::Register, StorageTag::Bram}) {
        for (auto& p : alloc.probes) {
            p.depth = 2;
            p.storage = storage;
        }
        if (fits()) return alloc;
    }

    throw_error(Errc::Unfittable,
                "even a single depth-2 probe on the pragma root exceeds the remaining "
                "budget; free resources or extend the board budget");
}

std::string CostConstants::to_json() const {
    json doc;
    doc["c_axi"] = c_axi;
    doc["c_pc"] = c_pc;
    doc["c_decode"] = c_decode;
    doc["c_l1"] = c_l1;
    doc["c_l2"] = c_l2;
    doc["c_f1"] = c_f1;
    doc["c_f2"] = c_f2;
    doc["decode_variant"] = to_string(decode_variant);
    return doc.dump(2) + "\n";
}

CostConstants CostConstants::from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw_error(Errc::Syntax, std::string("cost constants: ") + e.what());
    }
    CostConstants k;
    auto load = [&](const char* key, std::uint64_t& field) {
        if (doc.contains(key)) field = doc.at(key).get<std::uint64_t>();
    };
    load("c_axi", k.c_axi);
    load("c_pc", k.c_pc);
    load("c_decode", k.c_decode);
    load("c_l1", k.c_l1);
    load("c_l2", k.c_l2);
    load("c_f1", k.c_f1);
    load("c_f2", k.c_f2);
    if (doc.contains("decode_variant")) {
        const std::string v = doc.at("decode_variant").get<std::string>();
        if (v == "staged") {
            k.decode_variant = CostConstants::DecodeVariant::Staged;
        } else if (v == "monolithic") {
            k.decode_variant = CostConstants::DecodeVariant::Monolithic;
        } else {
            throw_error(Errc::Validation, "decode_variant must be monolithic|staged");
        }
    }
    return k;
}

const char* to_string(CostConstants::DecodeVariant v) {
    return v == CostConstants::DecodeVariant::Monolithic ? "monolithic" : "staged";
}

}  // namespace probeforge
