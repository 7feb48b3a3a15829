#include "probeforge/workspace.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "probeforge/errors.hpp"

namespace probeforge {

using nlohmann::json;

namespace {

// Compact SHA-256 (FIPS 180-4).
struct Sha256 {
    std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                      0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    std::array<std::uint8_t, 64> block{};
    std::size_t block_len = 0;
    std::uint64_t total_len = 0;

    static constexpr std::array<std::uint32_t, 64> k = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
        0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
        0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
        0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
        0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
        0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
        0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
        0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
        0xc67178f2};

    static std::uint32_t rotr(std::uint32_t x, unsigned n) { return (x >> n) | (x << (32 - n)); }

    void compress() {
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i) {
            w[i] = (std::uint32_t(block[i * 4]) << 24) | (std::uint32_t(block[i * 4 + 1]) << 16) |
                   (std::uint32_t(block[i * 4 + 2]) << 8) | std::uint32_t(block[i * 4 + 3]);
        }
        for (int i = 16; i < 64; ++i) {
            const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        auto [a, b, c, d, e, f, g, hh] = h;
        for (int i = 0; i < 64; ++i) {
            const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            const std::uint32_t ch = (e & f) ^ (~e & g);
            const std::uint32_t t1 = hh + s1 + ch + k[i] + w[i];
            const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            const std::uint32_t t2 = s0 + maj;
            hh = g;
            g = f;
            f = e;
            e = d + t1;
            d = c;
            c = b;
            b = a;
            a = t1 + t2;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
        h[5] += f;
        h[6] += g;
        h[7] += hh;
    }

    void update(const std::uint8_t* data, std::size_t len) {
        total_len += len;
        while (len > 0) {
            const std::size_t take = std::min(len, block.size() - block_len);
            std::memcpy(block.data() + block_len, data, take);
            block_len += take;
            data += take;
            len -= take;
            if (block_len == block.size()) {
                compress();
                block_len = 0;
            }
        }
    }

    std::string hex_digest() {
        const std::uint64_t bit_len = total_len * 8;
        const std::uint8_t pad = 0x80;
        update(&pad, 1);
        const std::uint8_t zero = 0;
        while (block_len != 56) update(&zero, 1);
        std::uint8_t len_bytes[8];
        for (int i = 0; i < 8; ++i) len_bytes[i] = std::uint8_t(bit_len >> (8 * (7 - i)));
        update(len_bytes, 8);

        static const char* digits = "0123456789abcdef";
        std::string out;
        out.reserve(64);
        for (std::uint32_t word : h) {
            for (int i = 3; i >= 0; --i) {
                const std::uint8_t byte = std::uint8_t(word >> (8 * i));
                out += digits[byte >> 4];
                out += digits[byte & 0xf];
            }
        }
        return out;
    }
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    Sha256 hasher;
    hasher.update(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size());
    return hasher.hex_digest();
}

const char* to_string(ArtifactKind kind) {
    switch (kind) {
        case ArtifactKind::ManifestNormalized: return "manifest-normalized";
        case ArtifactKind::Hierarchy: return "hierarchy";
        case ArtifactKind::Mapping: return "mapping";
        case ArtifactKind::ProbePlan: return "probe_plan";
        case ArtifactKind::Allocation: return "allocation";
        case ArtifactKind::Trace: return "trace";
        case ArtifactKind::Report: return "report";
    }
    return "unknown";
}

ArtifactStore::ArtifactStore(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) {
        throw_error(Errc::Io, "cannot create workspace at " + dir_.string() + ": " + ec.message());
    }
}

std::filesystem::path ArtifactStore::path_for(ArtifactKind kind, const std::string& key) const {
    return dir_ / to_string(kind) / (key + ".json");
}

std::string ArtifactStore::store(ArtifactKind kind, const std::string& input_material,
                                 const std::string& artifact) {
    const std::string key = key_for(input_material);
    const std::filesystem::path path = path_for(kind, key);
    if (std::filesystem::exists(path)) return key;  // append-only; keyed content is final

    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw_error(Errc::Io, "cannot write " + tmp.string());
        out << artifact;
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw_error(Errc::Io, "cannot finalize " + path.string() + ": " + ec.message());
    return key;
}

std::optional<std::string> ArtifactStore::load(ArtifactKind kind, const std::string& key) const {
    std::ifstream in(path_for(kind, key), std::ios::binary);
    if (!in) return std::nullopt;
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

bool ArtifactStore::contains(ArtifactKind kind, const std::string& key) const {
    return std::filesystem::exists(path_for(kind, key));
}

std::vector<ArtifactStore::Entry> ArtifactStore::list() const {
    std::vector<Entry> entries;
    if (!std::filesystem::exists(dir_)) return entries;
    for (const auto& kind_dir : std::filesystem::directory_iterator(dir_)) {
        if (!kind_dir.is_directory()) continue;
        for (const auto& file : std::filesystem::directory_iterator(kind_dir.path())) {
            if (file.path().extension() != ".json") continue;
            entries.push_back({kind_dir.path().filename().string(), file.path().stem().string()});
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.kind != b.kind ? a.kind < b.kind : a.key < b.key;
    });
    return entries;
}

void ArtifactStore::write_note(const std::string& name, const std::string& text) {
    const std::filesystem::path path = dir_ / name;
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw_error(Errc::Io, "cannot write " + tmp.string());
        out << text;
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw_error(Errc::Io, "cannot finalize " + path.string() + ": " + ec.message());
}

std::optional<std::string> ArtifactStore::read_note(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    if (!in) return std::nullopt;
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

std::string StageKeys::to_json() const {
    json doc;
    doc["manifest"] = manifest;
    doc["hierarchy"] = hierarchy;
    doc["mapping"] = mapping;
    doc["probe_plan"] = probe_plan;
    doc["allocation"] = allocation;
    return doc.dump(2) + "\n";
}

StageKeys StageKeys::from_json(const std::string& text) {
    json doc = json::parse(text);
    StageKeys keys;
    keys.manifest = doc.at("manifest").get<std::string>();
    keys.hierarchy = doc.at("hierarchy").get<std::string>();
    keys.mapping = doc.at("mapping").get<std::string>();
    keys.probe_plan = doc.at("probe_plan").get<std::string>();
    keys.allocation = doc.at("allocation").get<std::string>();
    return keys;
}

ReusePlan plan_incremental(const std::optional<StageKeys>& prev, const StageKeys& next) {
    if (!prev) {
        throw_error(Errc::NoPreviousRun, "no previous run recorded in this workspace");
    }
    ReusePlan plan;
    struct Stage {
        const char* name;
        const std::string& before;
        const std::string& after;
    };
    const Stage stages[] = {
        {"manifest-normalized", prev->manifest, next.manifest},
        {"hierarchy", prev->hierarchy, next.hierarchy},
        {"mapping", prev->mapping, next.mapping},
        {"probe_plan", prev->probe_plan, next.probe_plan},
        {"allocation", prev->allocation, next.allocation},
    };
    for (const Stage& s : stages) {
        if (s.before == s.after) {
            plan.reused.push_back(std::string(s.name) + ":" + s.after);
        } else {
            plan.rebuilt.push_back(s.name);
        }
    }
    plan.reuse_fraction = static_cast<double>(plan.reused.size()) / 5.0;
    return plan;
}

}  // namespace probeforge
