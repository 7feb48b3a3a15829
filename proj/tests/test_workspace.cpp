#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "probeforge/errors.hpp"
#include "probeforge/pipeline.hpp"
#include "probeforge/workspace.hpp"
#include "testutil.hpp"

using namespace probeforge;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    static int counter = 0;
    fs::path dir = fs::temp_directory_path() /
                   ("probeforge_ws_" + tag + "_" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("sha256 matches the FIPS vectors") {
    CHECK(sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
          "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
    // Block-boundary exercise.
    CHECK(sha256_hex(std::string(64, 'a')) ==
          "ffe054fe7ae0cb6dc65c3af9b61d5209f439851db43d0ba5997337df154668eb");
}

TEST_CASE("store then load returns byte-identical artifacts") {
    ArtifactStore store(temp_dir("roundtrip"));
    const std::string artifact = "{\"x\": 1}\n";
    const std::string key = store.store(ArtifactKind::Hierarchy, "inputs-v1", artifact);
    CHECK(key == sha256_hex("inputs-v1"));
    CHECK(store.load(ArtifactKind::Hierarchy, key) == artifact);
    CHECK(store.contains(ArtifactKind::Hierarchy, key));

    // Same inputs -> same key; the stored artifact is final.
    CHECK(store.store(ArtifactKind::Hierarchy, "inputs-v1", artifact) == key);
}

TEST_CASE("unknown keys miss") {
    ArtifactStore store(temp_dir("miss"));
    CHECK_FALSE(store.load(ArtifactKind::Mapping, std::string(64, '0')).has_value());
    CHECK_FALSE(store.contains(ArtifactKind::Trace, "nope"));
}

TEST_CASE("different inputs get distinct keys") {
    ArtifactStore store(temp_dir("distinct"));
    const std::string a = store.store(ArtifactKind::ProbePlan, "target:compute", "A");
    const std::string b = store.store(ArtifactKind::ProbePlan, "target:sum", "B");
    CHECK(a != b);
    CHECK(store.list().size() == 2);
}

TEST_CASE("incremental planning classifies the three scenarios") {
    StageKeys before{"m1", "h1", "x1", "p1", "a1"};

    SUBCASE("target-only change reuses all extraction artifacts") {
        StageKeys after{"m1", "h1", "x1", "p2", "a2"};
        const ReusePlan plan = plan_incremental(before, after);
        CHECK(plan.reused.size() == 3);
        CHECK(plan.rebuilt == std::vector<std::string>{"probe_plan", "allocation"});
        CHECK(plan.reuse_fraction == doctest::Approx(3.0 / 5.0));
    }
    SUBCASE("identical rerun reuses everything") {
        const ReusePlan plan = plan_incremental(before, before);
        CHECK(plan.reused.size() == 5);
        CHECK(plan.rebuilt.empty());
        CHECK(plan.reuse_fraction == doctest::Approx(1.0));
    }
    SUBCASE("manifest edit rebuilds the whole pipeline") {
        StageKeys after{"m2", "h2", "x2", "p2", "a2"};
        const ReusePlan plan = plan_incremental(before, after);
        CHECK(plan.reused.empty());
        CHECK(plan.rebuilt.size() == 5);
    }
    SUBCASE("config-only change reuses through the probe plan") {
        StageKeys after{"m1", "h1", "x1", "p1", "a9"};
        const ReusePlan plan = plan_incremental(before, after);
        CHECK(plan.reused.size() == 4);
        CHECK(plan.rebuilt == std::vector<std::string>{"allocation"});
    }
}

TEST_CASE("planning without a previous run fails loudly") {
    StageKeys next{"m", "h", "x", "p", "a"};
    CHECK_THROWS_AS(plan_incremental(std::nullopt, next), Error);
    try {
        plan_incremental(std::nullopt, next);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NoPreviousRun);
    }
}

TEST_CASE("stage keys serialize and parse") {
    StageKeys keys{"m", "h", "x", "p", "a"};
    CHECK(StageKeys::from_json(keys.to_json()) == keys);
}

TEST_CASE("extraction keys depend on the manifest only, never the target") {
    // Run the pipeline twice into one workspace with different targets; the
    // extraction artifacts must be bit-identical, and only probe_plan +
    // allocation may differ.
    const fs::path ws = temp_dir("incr");
    const fs::path scratch = temp_dir("incr_out");
    const std::string manifest_path = (scratch / "toy.json").string();
    write_text_file(manifest_path, testutil::toy_manifest_text());

    auto run_with_target = [&](const std::string& target, const std::string& out) {
        RunConfig rc;
        rc.manifest_path = manifest_path;
        if (!target.empty()) rc.target = target;
        rc.mode = SimMode::Cosim;
        rc.workspace_dir = ws.string();
        rc.out_dir = (scratch / out).string();
        std::ostringstream sink;
        REQUIRE(run_pipeline(rc, sink, sink) == 0);
        return StageKeys::from_json(*ArtifactStore(ws).read_last_run());
    };

    const StageKeys full = run_with_target("", "full");
    const StageKeys sub = run_with_target("compute/sum", "sub");

    CHECK(full.manifest == sub.manifest);
    CHECK(full.hierarchy == sub.hierarchy);
    CHECK(full.mapping == sub.mapping);
    CHECK(full.probe_plan != sub.probe_plan);
    CHECK(full.allocation != sub.allocation);

    ArtifactStore store(ws);
    CHECK(store.load(ArtifactKind::Hierarchy, full.hierarchy) ==
          store.load(ArtifactKind::Hierarchy, sub.hierarchy));

    const ReusePlan plan = plan_incremental(full, sub);
    CHECK(plan.reuse_fraction == doctest::Approx(3.0 / 5.0));

    // Full rebuild in a fresh workspace produces byte-identical artifacts for
    // the same target (incremental == from-scratch).
    const fs::path ws2 = temp_dir("fresh");
    RunConfig rc;
    rc.manifest_path = manifest_path;
    rc.target = "compute/sum";
    rc.mode = SimMode::Cosim;
    rc.workspace_dir = ws2.string();
    rc.out_dir = (scratch / "fresh").string();
    std::ostringstream sink;
    REQUIRE(run_pipeline(rc, sink, sink) == 0);
    const StageKeys fresh = StageKeys::from_json(*ArtifactStore(ws2).read_last_run());
    CHECK(fresh.probe_plan == sub.probe_plan);
    CHECK(fresh.allocation == sub.allocation);
    CHECK(ArtifactStore(ws2).load(ArtifactKind::ProbePlan, fresh.probe_plan) ==
          store.load(ArtifactKind::ProbePlan, sub.probe_plan));
}
