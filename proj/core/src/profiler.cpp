#include "probeforge/profiler.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "probeforge/errors.hpp"

namespace probeforge {

using nlohmann::json;

ProfilerState::ProfilerState(std::vector<ProbeRuntime> probes, std::uint32_t counter_width,
                             bool dumps_enabled, double dump_bytes_per_cycle)
    : probes_(std::move(probes)),
      state_(probes_.size()),
      counter_width_(counter_width),
      dumps_enabled_(dumps_enabled),
      dump_bytes_per_cycle_(dump_bytes_per_cycle) {}

void ProfilerState::issue_dump(std::uint32_t probe, std::uint64_t cycle) {
    PerProbe& ps = state_[probe];
    DumpRecord rec;
    rec.probe = probe;
    rec.entry_count = ps.queue.size();
    rec.bytes = rec.entry_count * (counter_width_ / 8);
    rec.issue_cycle = cycle;
    const std::uint64_t start = std::max(cycle, last_completion_);
    const auto duration =
        static_cast<std::uint64_t>(std::ceil(static_cast<double>(rec.bytes) / dump_bytes_per_cycle_));
    rec.completion_cycle = start + duration;
    last_completion_ = rec.completion_cycle;
    dumps_.push_back(rec);

    for (auto& e : ps.queue) ps.dumped.push_back(e);
    ps.queue.clear();
    ps.streaming = true;
    ps.in_flight = true;
}

void ProfilerState::on_toggle(std::uint32_t probe, Stream stream, Edge edge,
                              std::uint64_t cycle) {
    if (cycle != global_counter_) {
        throw_error(Errc::EdgeOrderViolation,
                    "toggle for " + probes_[probe].rtl_name + " at cycle " +
                        std::to_string(cycle) + " but the global counter is at " +
                        std::to_string(global_counter_));
    }
    PerProbe& ps = state_[probe];
    bool& expect_rise = ps.expect_rise[static_cast<int>(stream)];
    if ((edge == Edge::Rise) != expect_rise) {
        throw_error(Errc::EdgeOrderViolation,
                    std::string("edge order violation on ") + probes_[probe].rtl_name + " (" +
                        to_string(stream) + " stream): got two " + to_string(edge) +
                        " edges without the opposite edge");
    }
    expect_rise = !expect_rise;

    TimestampEntry entry{probe, stream, edge, cycle};
    const std::uint32_t capacity = probes_[probe].capacity;

    if (ps.queue.size() >= capacity) {
        // Slots are only still occupied here while a dump is in flight (or
        // dumps are disabled); the toggle happened in hardware but cannot be
        // recorded.
        ps.overflow = true;
        lossy_ = true;
        lost_.push_back(entry);
        return;
    }

    ps.queue.push_back(entry);
    if (ps.queue.size() == capacity) {
        ps.full_flag = true;
        if (dumps_enabled_ && !ps.in_flight) {
            issue_dump(probe, cycle);
        }
    }
}

void ProfilerState::advance(std::uint64_t to_cycle) {
    if (to_cycle < global_counter_) {
        throw_error(Errc::EdgeOrderViolation,
                    "global counter may not move backwards (advance to " +
                        std::to_string(to_cycle) + " from " + std::to_string(global_counter_) +
                        ")");
    }
    if (counter_width_ < 64 && to_cycle >= (1ull << counter_width_)) {
        throw_error(Errc::CounterOverflow,
                    "global cycle counter overflow: cycle " + std::to_string(to_cycle) +
                        " does not fit " + std::to_string(counter_width_) +
                        " bits; rerun with a 64-bit counter");
    }
    global_counter_ = to_cycle;

    while (drained_ < dumps_.size() && dumps_[drained_].completion_cycle <= to_cycle) {
        const DumpRecord& rec = dumps_[drained_];
        PerProbe& ps = state_[rec.probe];
        ps.in_flight = false;
        ps.full_flag = false;
        ++drained_;
        // Streaming probes flush whatever staged while the port was busy.
        if (ps.streaming && !ps.queue.empty()) {
            issue_dump(rec.probe, rec.completion_cycle);
        }
    }
}

bool ProfilerState::dump_in_flight(std::uint64_t cycle) const {
    for (std::size_t i = drained_; i < dumps_.size(); ++i) {
        if (dumps_[i].issue_cycle <= cycle && cycle < dumps_[i].completion_cycle) return true;
        if (dumps_[i].issue_cycle > cycle) break;
    }
    return false;
}

std::uint64_t ProfilerState::dumped_bytes() const {
    std::uint64_t total = 0;
    for (const auto& rec : dumps_) total += rec.bytes;
    return total;
}

RawTimestampLog ProfilerState::finalize() {
    // Staged entries of streaming probes still belong to DRAM; flush them now.
    for (std::uint32_t i = 0; i < state_.size(); ++i) {
        PerProbe& ps = state_[i];
        if (ps.streaming && !ps.queue.empty()) {
            std::uint64_t at = ps.in_flight ? last_completion_ : global_counter_;
            issue_dump(i, at);
        }
    }

    RawTimestampLog log;
    log.final_cycle = global_counter_;
    log.counter_width = counter_width_;
    log.lossy = lossy_;
    log.lost = lost_;
    log.dumps = dumps_;
    for (std::uint32_t i = 0; i < state_.size(); ++i) {
        ProbeLog pl;
        pl.node = probes_[i].node;
        pl.rtl_name = probes_[i].rtl_name;
        pl.entries = state_[i].dumped;
        for (const auto& e : state_[i].queue) pl.entries.push_back(e);
        log.probes.push_back(std::move(pl));
    }
    return log;
}

std::uint64_t RawTimestampLog::total_entries() const {
    std::uint64_t n = 0;
    for (const auto& p : probes) n += p.entries.size();
    return n;
}

std::uint64_t RawTimestampLog::dumped_bytes() const {
    std::uint64_t total = 0;
    for (const auto& rec : dumps) total += rec.bytes;
    return total;
}

std::string RawTimestampLog::to_csv() const {
    std::ostringstream out;
    out << "probe_rtl_name,edge,cycle\n";
    for (const auto& p : probes) {
        for (const auto& e : p.entries) {
            out << p.rtl_name << ',' << to_string(e.edge) << ',' << e.cycle << '\n';
        }
    }
    return out.str();
}

std::string RawTimestampLog::to_json() const {
    json doc;
    doc["final_cycle"] = final_cycle;
    doc["counter_width"] = counter_width;
    doc["lossy"] = lossy;
    json probes_json = json::array();
    for (const auto& p : probes) {
        json entries = json::array();
        for (const auto& e : p.entries) {
            entries.push_back({{"stream", to_string(e.stream)},
                               {"edge", to_string(e.edge)},
                               {"cycle", e.cycle}});
        }
        probes_json.push_back({{"node", p.node},
                               {"rtl_name", p.rtl_name},
                               {"entries", std::move(entries)}});
    }
    doc["probes"] = std::move(probes_json);
    json dumps_json = json::array();
    for (const auto& d : dumps) {
        dumps_json.push_back({{"probe", d.probe},
                              {"entry_count", d.entry_count},
                              {"bytes", d.bytes},
                              {"issue_cycle", d.issue_cycle},
                              {"completion_cycle", d.completion_cycle}});
    }
    doc["dumps"] = std::move(dumps_json);
    return doc.dump(2) + "\n";
}

RawTimestampLog RawTimestampLog::from_json(const std::string& text) {
    json doc = json::parse(text);
    RawTimestampLog log;
    log.final_cycle = doc.at("final_cycle").get<std::uint64_t>();
    log.counter_width = doc.at("counter_width").get<std::uint32_t>();
    log.lossy = doc.at("lossy").get<bool>();
    std::uint32_t index = 0;
    for (const auto& pj : doc.at("probes")) {
        ProbeLog pl;
        pl.node = pj.at("node").get<NodeId>();
        pl.rtl_name = pj.at("rtl_name").get<std::string>();
        for (const auto& ej : pj.at("entries")) {
            TimestampEntry e;
            e.probe = index;
            e.stream = ej.at("stream").get<std::string>() == "iteration" ? Stream::Iteration
                                                                         : Stream::Activation;
            e.edge = ej.at("edge").get<std::string>() == "fall" ? Edge::Fall : Edge::Rise;
            e.cycle = ej.at("cycle").get<std::uint64_t>();
            pl.entries.push_back(e);
        }
        log.probes.push_back(std::move(pl));
        ++index;
    }
    for (const auto& dj : doc.at("dumps")) {
        DumpRecord d;
        d.probe = dj.at("probe").get<std::uint32_t>();
        d.entry_count = dj.at("entry_count").get<std::uint64_t>();
        d.bytes = dj.at("bytes").get<std::uint64_t>();
        d.issue_cycle = dj.at("issue_cycle").get<std::uint64_t>();
        d.completion_cycle = dj.at("completion_cycle").get<std::uint64_t>();
        log.dumps.push_back(d);
    }
    return log;
}

const char* to_string(Edge e) { return e == Edge::Rise ? "rise" : "fall"; }
const char* to_string(Stream s) { return s == Stream::Activation ? "activation" : "iteration"; }

}  // namespace probeforge
