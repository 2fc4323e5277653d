#include "doctest.h"

#include "diafair/errors.hpp"
#include "diafair/rttm.hpp"

#include <random>

using namespace diafair;

TEST_CASE("canonical SPEAKER line") {
    const auto m = parse_rttm_string("SPEAKER utt001 1 0.00 2.50 <NA> <NA> spk00 <NA> <NA>\n");
    REQUIRE(m.size() == 1);
    const auto& h = m.at("utt001");
    CHECK(h.utterance_id == "utt001");
    REQUIRE(h.segments.size() == 1);
    CHECK(h.segments[0] == SpeakerSegment{0.0, 2.5, "spk00"});
}

TEST_CASE("empty stream gives an empty map") {
    CHECK(parse_rttm_string("").empty());
    CHECK(parse_rttm_string(";; only a comment\n\n   \n").empty());
    CHECK(serialize_rttm({}).empty());
}

TEST_CASE("segments aggregate by file id in order") {
    const auto m = parse_rttm_string(
        "SPEAKER utt001 1 0.00 1.00 <NA> <NA> spk00 <NA> <NA>\n"
        "SPEAKER utt002 1 0.00 1.00 <NA> <NA> x <NA> <NA>\n"
        "SPEAKER utt001 1 1.00 0.50 <NA> <NA> spk01 <NA> <NA>\n");
    REQUIRE(m.size() == 2);
    const auto& h = m.at("utt001");
    REQUIRE(h.segments.size() == 2);
    CHECK(h.segments[0].speaker == "spk00");
    CHECK(h.segments[1].speaker == "spk01");
}

TEST_CASE("tabs and repeated spaces separate fields") {
    const auto m = parse_rttm_string("SPEAKER\tu 1   0.5\t1  <NA> <NA> s <NA> <NA>\r\n");
    CHECK(m.at("u").segments.at(0) == SpeakerSegment{0.5, 1.0, "s"});
}

TEST_CASE("rttm errors carry the line number") {
    SUBCASE("field count") {
        try {
            parse_rttm_string(";; c\nSPEAKER u 1 0.0 1.0 <NA> <NA> s <NA>\n");
            FAIL("expected MalformedLine");
        } catch (const MalformedLine& e) {
            CHECK(e.line_no == 2);
        }
    }
    SUBCASE("non-numeric time") {
        CHECK_THROWS_AS(parse_rttm_string("SPEAKER u 1 abc 1.0 <NA> <NA> s <NA> <NA>\n"), MalformedLine);
        CHECK_THROWS_AS(parse_rttm_string("SPEAKER u 1 0.0 1.0x <NA> <NA> s <NA> <NA>\n"), MalformedLine);
        CHECK_THROWS_AS(parse_rttm_string("SPEAKER u 1 nan 1.0 <NA> <NA> s <NA> <NA>\n"), MalformedLine);
    }
    SUBCASE("negative onset") {
        CHECK_THROWS_AS(parse_rttm_string("SPEAKER u 1 -0.5 1.0 <NA> <NA> s <NA> <NA>\n"), MalformedLine);
    }
    SUBCASE("non-positive duration") {
        CHECK_THROWS_AS(parse_rttm_string("SPEAKER u 1 0.0 0.0 <NA> <NA> s <NA> <NA>\n"), NonPositiveDuration);
        CHECK_THROWS_AS(parse_rttm_string("SPEAKER u 1 0.0 -1 <NA> <NA> s <NA> <NA>\n"), NonPositiveDuration);
    }
    SUBCASE("other record types") {
        try {
            parse_rttm_string("\nSPKR-INFO u 1 <NA> <NA> <NA> unknown s <NA> <NA>\n");
            FAIL("expected UnsupportedType");
        } catch (const UnsupportedType& e) {
            CHECK(e.line_no == 2);
        }
    }
}

TEST_CASE("serialize_rttm renders two decimals and sorted ids") {
    HypothesisMap m;
    m["b"] = {"b", {{1.5, 0.25, "s1"}}};
    m["a"] = {"a", {{0.0, 3.0, "s0"}, {3.004, 1.0, "s1"}}};
    m["empty"] = {"empty", {}};
    const std::string text = serialize_rttm(m);
    CHECK(text ==
          "SPEAKER a 1 0.00 3.00 <NA> <NA> s0 <NA> <NA>\n"
          "SPEAKER a 1 3.00 1.00 <NA> <NA> s1 <NA> <NA>\n"
          "SPEAKER b 1 1.50 0.25 <NA> <NA> s1 <NA> <NA>\n");
}

TEST_CASE("round trip and line-count preservation on random maps") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> n_ids(0, 5), n_segs(1, 6), centis(0, 50000), dur(1, 2000), label(0, 3);
    for (int iter = 0; iter < 100; ++iter) {
        HypothesisMap m;
        std::size_t lines = 0;
        const int ids = n_ids(rng);
        for (int i = 0; i < ids; ++i) {
            const std::string id = "utt" + std::to_string(i * 7 + iter);
            Hypothesis h{id, {}};
            const int segs = n_segs(rng);
            for (int s = 0; s < segs; ++s) {
                h.segments.push_back({centis(rng) / 100.0, dur(rng) / 100.0, "spk" + std::to_string(label(rng))});
            }
            lines += h.segments.size();
            m.emplace(id, std::move(h));
        }
        const std::string text = serialize_rttm(m);
        CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == lines);
        CHECK(parse_rttm_string(text) == m);
    }
}
