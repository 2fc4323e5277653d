#include "doctest.h"
#include "test_support.hpp"

#include "diafair/errors.hpp"
#include "diafair/runner.hpp"

#include <chrono>

using namespace diafair;
using diafair::testing::TempDir;
using diafair::testing::write_file;

namespace {

const std::string kOneSpeaker = "printf 'SPEAKER x 1 0.00 1.00 <NA> <NA> s <NA> <NA>\\n' > {out} # {audio}";
const std::string kTwoSpeakers =
    "printf 'SPEAKER x 1 0.00 1.00 <NA> <NA> a <NA> <NA>\\nSPEAKER x 1 1.00 1.234 <NA> <NA> b <NA> <NA>\\n' > {out} # {audio}";

struct Setup {
    TempDir dir;
    std::vector<UtteranceRecord> records;

    explicit Setup(int n) {
        std::filesystem::create_directories(dir / "audio");
        for (int i = 0; i < n; ++i) {
            UtteranceRecord r;
            r.utterance_id = "clip" + std::to_string(i);
            r.audio_path = r.utterance_id + ".wav";
            write_file(dir / ("audio/" + r.audio_path), "audio bytes " + std::to_string(i));
            records.push_back(r);
        }
    }

    RunnerConfig config(const std::string& command) const {
        RunnerConfig cfg;
        cfg.command_template = command;
        cfg.cache_dir = dir / "cache";
        cfg.audio_root = dir / "audio";
        cfg.timeout_seconds = 20;
        return cfg;
    }
};

}  // namespace

TEST_CASE("load_hypotheses from a directory") {
    const auto dir = testing::fixture("tiny/rttm");
    const std::set<std::string> ids{"a1", "a2", "a3", "a4", "a5", "a6"};
    const auto m = load_hypotheses(dir, ids, MissingPolicy::Error);
    REQUIRE(m.size() == 6);
    CHECK(count_speakers(m.at("a1")) == 1);
    CHECK(count_speakers(m.at("a2")) == 2);
    CHECK(count_speakers(m.at("a4")) == 0);
    CHECK(count_speakers(m.at("a6")) == 3);
}

TEST_CASE("load_hypotheses missing ids follow the policy") {
    const auto dir = testing::fixture("tiny/rttm");
    const std::set<std::string> ids{"a1", "nope"};
    CHECK_THROWS_AS(load_hypotheses(dir, ids, MissingPolicy::Error), MissingHypothesis);
    const auto m = load_hypotheses(dir, ids, MissingPolicy::TreatAsZero);
    REQUIRE(m.size() == 2);
    CHECK(m.at("nope").segments.empty());
    CHECK_THROWS_AS(load_hypotheses(dir / "absent", ids, MissingPolicy::TreatAsZero), Error);
}

TEST_CASE("load_hypotheses from one combined file and conflicting duplicates") {
    TempDir dir;
    write_file(dir / "all.rttm",
               "SPEAKER u1 1 0.00 1.00 <NA> <NA> s <NA> <NA>\n"
               "SPEAKER u2 1 0.00 1.00 <NA> <NA> s <NA> <NA>\n"
               "SPEAKER u2 1 1.00 1.00 <NA> <NA> t <NA> <NA>\n");
    const auto m = load_hypotheses(dir / "all.rttm", {"u1", "u2"}, MissingPolicy::Error);
    CHECK(count_speakers(m.at("u2")) == 2);

    write_file(dir / "other.rttm", "SPEAKER u1 1 5.00 1.00 <NA> <NA> q <NA> <NA>\n");
    CHECK_THROWS_AS(load_hypotheses(dir.path(), {"u1", "u2"}, MissingPolicy::Error), ConflictingHypothesis);
}

TEST_CASE("expand_command quotes substituted paths") {
    CHECK(expand_command("tool {audio} -o {out}", "a b.wav", "o'x.rttm") == "tool 'a b.wav' -o 'o'\\''x.rttm'");
}

TEST_CASE("file_checksum") {
    TempDir dir;
    write_file(dir / "f", "abc");
    CHECK(file_checksum(dir / "f") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("runner config validation") {
    RunnerConfig cfg;
    cfg.cache_dir = "/tmp/x";
    cfg.command_template = "tool {audio}";
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
    cfg.command_template = "tool {audio} {out}";
    CHECK_NOTHROW(cfg.validate());
    cfg.workers = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidConfig);
}

TEST_CASE("run_diarizer executes once, then serves the cache") {
    Setup s(3);
    const auto cfg = s.config(kTwoSpeakers);
    RunStats first;
    const auto a = run_diarizer(s.records, cfg, &first);
    CHECK(first.executed == 3);
    CHECK(first.cache_hits == 0);
    REQUIRE(a.size() == 3);
    CHECK(a.at("clip1").utterance_id == "clip1");
    CHECK(count_speakers(a.at("clip1")) == 2);
    CHECK(a.at("clip1").segments[1].duration == 1.23);  // two-decimal canonical form
    CHECK(std::filesystem::is_regular_file(cfg.cache_dir / "clip0.rttm"));
    CHECK(std::filesystem::is_regular_file(cfg.cache_dir / "clip0.sum"));

    RunStats second;
    const auto b = run_diarizer(s.records, cfg, &second);
    CHECK(second.executed == 0);
    CHECK(second.cache_hits == 3);
    CHECK(a == b);
}

TEST_CASE("changed audio invalidates its cache entry") {
    Setup s(2);
    const auto cfg = s.config(kOneSpeaker);
    run_diarizer(s.records, cfg);
    write_file(s.dir / "audio/clip1.wav", "new recording");
    RunStats stats;
    run_diarizer(s.records, cfg, &stats);
    CHECK(stats.executed == 1);
    CHECK(stats.cache_hits == 1);
}

TEST_CASE("empty output is a valid no-speech hypothesis") {
    Setup s(1);
    const auto m = run_diarizer(s.records, s.config(": > {out} # {audio}"));
    CHECK(m.at("clip0").segments.empty());
    RunStats stats;
    run_diarizer(s.records, s.config(": > {out} # {audio}"), &stats);
    CHECK(stats.cache_hits == 1);
}

TEST_CASE("diarizer failures") {
    Setup s(2);
    SUBCASE("non-zero exit") {
        try {
            run_diarizer(s.records, s.config("exit 3 # {audio} {out}"));
            FAIL("expected DiarizerFailed");
        } catch (const DiarizerFailed& e) {
            CHECK(e.utterance_id == "clip0");
        }
    }
    SUBCASE("timeout kills the command") {
        auto cfg = s.config("sleep 30 # {audio} {out}");
        cfg.timeout_seconds = 1;
        const auto start = std::chrono::steady_clock::now();
        CHECK_THROWS_AS(run_diarizer(std::span(s.records).first(1), cfg), DiarizerTimeout);
        CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(10));
    }
    SUBCASE("no output file") { CHECK_THROWS_AS(run_diarizer(s.records, s.config("true {audio} {out}")), InvalidOutput); }
    SUBCASE("malformed output") {
        CHECK_THROWS_AS(run_diarizer(s.records, s.config("echo garbage > {out} # {audio}")), InvalidOutput);
    }
    SUBCASE("several file ids") {
        const std::string cmd =
            "printf 'SPEAKER x 1 0 1 <NA> <NA> s <NA> <NA>\\nSPEAKER y 1 0 1 <NA> <NA> s <NA> <NA>\\n' > {out} # {audio}";
        CHECK_THROWS_AS(run_diarizer(s.records, s.config(cmd)), InvalidOutput);
    }
    SUBCASE("missing audio") {
        std::filesystem::remove(s.dir / "audio/clip1.wav");
        CHECK_THROWS_AS(run_diarizer(s.records, s.config(kOneSpeaker)), MissingAudio);
        CHECK(std::filesystem::exists(s.dir / "cache/clip0.sum"));  // the good record is still cached
        return;
    }
    CHECK_FALSE(std::filesystem::exists(s.dir / "cache/clip0.sum"));
}

TEST_CASE("failures become zero-speaker outcomes under TreatAsZero and are not cached") {
    Setup s(4);
    // Fails for odd clip numbers only.
    auto cfg = s.config("case {audio} in *[13].wav) exit 1;; esac; " + kOneSpeaker);
    cfg.missing_policy = MissingPolicy::TreatAsZero;
    RunStats stats;
    const auto m = run_diarizer(s.records, cfg, &stats);
    CHECK(stats.failures == 2);
    CHECK(count_speakers(m.at("clip0")) == 1);
    CHECK(m.at("clip1").segments.empty());
    CHECK_FALSE(std::filesystem::exists(cfg.cache_dir / "clip1.rttm"));

    RunStats again;
    run_diarizer(s.records, cfg, &again);
    CHECK(again.cache_hits == 2);
    CHECK(again.executed == 2);
}

TEST_CASE("parallel workers give the same result") {
    Setup s(12);
    auto serial_cfg = s.config(kTwoSpeakers);
    const auto serial = run_diarizer(s.records, serial_cfg);

    Setup t(12);
    auto cfg = t.config(kTwoSpeakers);
    cfg.workers = 4;
    RunStats stats;
    const auto parallel = run_diarizer(t.records, cfg, &stats);
    CHECK(stats.executed == 12);
    CHECK(parallel == serial);
}

TEST_CASE("the earliest failing record is reported with several workers") {
    Setup s(8);
    auto cfg = s.config("case {audio} in *[357].wav) exit 1;; esac; " + kOneSpeaker);
    cfg.workers = 4;
    try {
        run_diarizer(s.records, cfg);
        FAIL("expected DiarizerFailed");
    } catch (const DiarizerFailed& e) {
        CHECK(e.utterance_id == "clip3");
    }
}
