#pragma once
// Content-addressed artifact cache. Identical stage inputs map to identical
// keys and byte-identical artifacts, which is what makes target changes
// incremental: extraction artifacts (hierarchy/mapping) key off the
// normalized manifest alone and survive every probe-target change.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace probeforge {

std::string sha256_hex(const std::string& bytes);

enum class ArtifactKind {
    ManifestNormalized,
    Hierarchy,
    Mapping,
    ProbePlan,
    Allocation,
    Trace,
    Report,
};

const char* to_string(ArtifactKind kind);

class ArtifactStore {
  public:
    explicit ArtifactStore(std::filesystem::path dir);

    /// Layout: <dir>/<kind>/<hex-key>.json, written atomically
    /// (temp-then-rename). Returns the content key of `input_material`.
    std::string store(ArtifactKind kind, const std::string& input_material,
                      const std::string& artifact);

    std::optional<std::string> load(ArtifactKind kind, const std::string& key) const;
    bool contains(ArtifactKind kind, const std::string& key) const;

    std::string key_for(const std::string& input_material) const {
        return sha256_hex(input_material);
    }
    std::filesystem::path path_for(ArtifactKind kind, const std::string& key) const;

    struct Entry {
        std::string kind;
        std::string key;
    };
    std::vector<Entry> list() const;

    const std::filesystem::path& dir() const { return dir_; }

    /// Pipeline bookkeeping for `status` and incremental planning.
    void write_note(const std::string& name, const std::string& text);
    std::optional<std::string> read_note(const std::string& name) const;
    void write_last_run(const std::string& json_text) { write_note("last_run.json", json_text); }
    std::optional<std::string> read_last_run() const { return read_note("last_run.json"); }

  private:
    std::filesystem::path dir_;
};

/// The five build-stage keys of one pipeline run. Trace/report are run
/// products keyed downstream of these.
struct StageKeys {
    std::string manifest;
    std::string hierarchy;
    std::string mapping;
    std::string probe_plan;
    std::string allocation;

    bool operator==(const StageKeys&) const = default;
    std::string to_json() const;
    static StageKeys from_json(const std::string& text);
};

struct ReusePlan {
    std::vector<std::string> reused;   // "kind:key"
    std::vector<std::string> rebuilt;  // kind names
    double reuse_fraction = 0;         // reused / 5 build stages
};

/// Compare a previous run's stage keys with the next run's. Throws
/// Error{NoPreviousRun} when there is nothing to compare against.
ReusePlan plan_incremental(const std::optional<StageKeys>& prev, const StageKeys& next);

}  // namespace probeforge
