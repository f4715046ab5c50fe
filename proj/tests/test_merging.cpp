#include <doctest.h>

#include <string>
#include <vector>

#include "lmchunk/errors.hpp"
#include "lmchunk/merging.hpp"

using namespace lmchunk;

namespace {

// One sentence per length, text "x" repeated.
std::vector<Sentence> sentences_of(const std::vector<long>& lens) {
    std::vector<Sentence> out;
    long offset = 0;
    for (std::size_t i = 0; i < lens.size(); ++i) {
        Sentence s;
        s.index = static_cast<int>(i);
        s.text = std::string(static_cast<std::size_t>(lens[i]), 'x');
        s.char_len = lens[i];
        s.byte_offset = offset;
        offset += lens[i] + 1;
        out.push_back(s);
    }
    return out;
}

// One meta per sentence.
std::vector<MetaChunk> metas_of(const std::vector<long>& lens) {
    std::vector<MetaChunk> out;
    for (std::size_t i = 0; i < lens.size(); ++i) {
        MetaChunk m;
        m.start = static_cast<int>(i);
        m.end = static_cast<int>(i) + 1;
        m.char_len = lens[i];
        out.push_back(m);
    }
    return out;
}

std::vector<std::pair<int, int>> ranges(const std::vector<Chunk>& chunks) {
    std::vector<std::pair<int, int>> out;
    for (const auto& c : chunks) out.emplace_back(c.start, c.end);
    return out;
}

}  // namespace

TEST_CASE("overlap specs parse and round-trip") {
    CHECK(OverlapSpec::parse("none").mode == OverlapSpec::Mode::none);
    CHECK(OverlapSpec::parse("dynamic").mode == OverlapSpec::Mode::dynamic);
    auto fixed = OverlapSpec::parse("fixed:50");
    CHECK(fixed.mode == OverlapSpec::Mode::fixed);
    CHECK(fixed.k == 50);
    CHECK(fixed.to_string() == "fixed:50");
    CHECK(OverlapSpec::parse("none").to_string() == "none");

    CHECK_THROWS_AS(OverlapSpec::parse("fixed:0"), ConfigError);
    CHECK_THROWS_AS(OverlapSpec::parse("fixed:-3"), ConfigError);
    CHECK_THROWS_AS(OverlapSpec::parse("fixed:"), ConfigError);
    CHECK_THROWS_AS(OverlapSpec::parse("bogus"), ConfigError);
}

TEST_CASE("four 60-char metas at L=180 group as three plus one") {
    auto lens = std::vector<long>{60, 60, 60, 60};
    auto chunks = dynamic_merge(metas_of(lens), sentences_of(lens), 180, " ");
    REQUIRE(chunks.size() == 2);
    CHECK(ranges(chunks) == std::vector<std::pair<int, int>>{{0, 3}, {3, 4}});
    CHECK(chunks[0].char_len == 180);
    CHECK(chunks[1].char_len == 60);
}

TEST_CASE("an oversized single meta is emitted whole") {
    auto lens = std::vector<long>{500};
    auto chunks = dynamic_merge(metas_of(lens), sentences_of(lens), 178, " ");
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].char_len == 500);
}

TEST_CASE("two 100-char metas do not merge at L=150") {
    auto lens = std::vector<long>{100, 100};
    auto chunks = dynamic_merge(metas_of(lens), sentences_of(lens), 150, " ");
    REQUIRE(chunks.size() == 2);
}

TEST_CASE("reaching L exactly closes the chunk inclusively") {
    auto lens = std::vector<long>{90, 90, 10};
    auto chunks = dynamic_merge(metas_of(lens), sentences_of(lens), 180, " ");
    REQUIRE(chunks.size() == 2);
    CHECK(ranges(chunks) == std::vector<std::pair<int, int>>{{0, 2}, {2, 3}});
}

TEST_CASE("multi-sentence metas carry their sentence ranges into chunks") {
    auto lens = std::vector<long>{10, 20, 30};
    auto sents = sentences_of(lens);
    std::vector<MetaChunk> metas = {{0, 2, 30}, {2, 3, 30}};
    auto chunks = dynamic_merge(metas, sents, 100, " ");
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].start == 0);
    CHECK(chunks[0].end == 3);
    CHECK(chunks[0].char_len == 60);
    CHECK(chunks[0].body == std::string(10, 'x') + " " + std::string(20, 'x') + " " +
                                std::string(30, 'x'));
    CHECK(chunks[0].text == chunks[0].body);
    CHECK(chunks[0].overlap_prefix.empty());
}

TEST_CASE("empty meta lists produce no chunks and L is validated") {
    auto sents = sentences_of({5});
    CHECK(dynamic_merge({}, sents, 100, " ").empty());
    CHECK_THROWS_AS(dynamic_merge(metas_of({5}), sents, 0, " "), std::invalid_argument);
}

TEST_CASE("dynamic overlap inherits the previous chunk's final sentence") {
    auto lens = std::vector<long>{8, 4, 8};
    auto sents = sentences_of(lens);
    std::vector<MetaChunk> metas = {{0, 2, 12}, {2, 3, 8}};
    auto chunks = dynamic_merge(metas, sents, 12, " ");
    REQUIRE(chunks.size() == 2);

    PplTrace trace;
    trace.values = {3.0, 1.0, 3.0};
    trace.theta = 0.0;
    trace.minima = {1};

    OverlapSpec spec;
    spec.mode = OverlapSpec::Mode::dynamic;
    auto with = apply_overlap(chunks, sents, &trace, spec, " ");
    REQUIRE(with.size() == 2);
    CHECK(with[0].overlap_prefix.empty());
    CHECK(with[0].text == with[0].body);
    CHECK(with[1].overlap_prefix == std::vector<int>{1});
    CHECK(with[1].text == sents[1].text + " " + with[1].body);
    // Body and char_len stay overlap-free.
    CHECK(with[1].body == sents[2].text);
    CHECK(with[1].char_len == 8);
}

TEST_CASE("dynamic overlap without a trace is an error") {
    auto lens = std::vector<long>{4, 4};
    auto sents = sentences_of(lens);
    auto chunks = dynamic_merge(metas_of(lens), sents, 4, " ");
    OverlapSpec spec;
    spec.mode = OverlapSpec::Mode::dynamic;
    CHECK_THROWS_AS(apply_overlap(chunks, sents, nullptr, spec, " "), MissingTraceError);
}

TEST_CASE("fixed overlap takes the smallest sufficient sentence suffix") {
    auto lens = std::vector<long>{5, 5, 7};
    auto sents = sentences_of(lens);
    std::vector<MetaChunk> metas = {{0, 2, 10}, {2, 3, 7}};
    auto chunks = dynamic_merge(metas, sents, 10, " ");
    REQUIRE(chunks.size() == 2);

    OverlapSpec spec;
    spec.mode = OverlapSpec::Mode::fixed;
    spec.k = 3;
    auto with = apply_overlap(chunks, sents, nullptr, spec, " ");
    CHECK(with[1].overlap_prefix == std::vector<int>{1});

    spec.k = 6;
    with = apply_overlap(chunks, sents, nullptr, spec, " ");
    CHECK(with[1].overlap_prefix == std::vector<int>{0, 1});
    CHECK(with[1].text ==
          sents[0].text + " " + sents[1].text + " " + sents[2].text);

    // A budget beyond the previous chunk takes all of it.
    spec.k = 100;
    with = apply_overlap(chunks, sents, nullptr, spec, " ");
    CHECK(with[1].overlap_prefix == std::vector<int>{0, 1});
}

TEST_CASE("no-overlap mode keeps chunks untouched") {
    auto lens = std::vector<long>{4, 4};
    auto sents = sentences_of(lens);
    auto chunks = dynamic_merge(metas_of(lens), sents, 4, " ");
    auto after = apply_overlap(chunks, sents, nullptr, OverlapSpec{}, " ");
    REQUIRE(after.size() == chunks.size());
    for (std::size_t i = 0; i < after.size(); ++i) {
        CHECK(after[i].text == chunks[i].text);
        CHECK(after[i].overlap_prefix.empty());
    }
}

TEST_CASE("reconstruct joins bodies regardless of overlap") {
    auto lens = std::vector<long>{6, 3, 6};
    auto sents = sentences_of(lens);
    std::vector<MetaChunk> metas = {{0, 2, 9}, {2, 3, 6}};
    auto chunks = dynamic_merge(metas, sents, 9, " ");
    const std::string original =
        sents[0].text + " " + sents[1].text + " " + sents[2].text;
    CHECK(reconstruct(chunks, " ") == original);

    OverlapSpec spec;
    spec.mode = OverlapSpec::Mode::fixed;
    spec.k = 2;
    auto with = apply_overlap(chunks, sents, nullptr, spec, " ");
    CHECK(reconstruct(with, " ") == original);
}
