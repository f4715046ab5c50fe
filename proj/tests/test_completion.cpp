#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "lmchunk/completion.hpp"
#include "lmchunk/errors.hpp"
#include "lmchunk/hash_embedder.hpp"
#include "lmchunk/scripted.hpp"

using namespace lmchunk;

namespace {

Chunk make_chunk(std::string body, int index = 0) {
    Chunk c;
    c.start = index;
    c.end = index + 1;
    c.body = body;
    c.text = body;
    c.char_len = static_cast<long>(body.size());
    return c;
}

std::vector<std::string> stage_names(const std::vector<StageTranscript>& ts) {
    std::vector<std::string> out;
    for (const auto& t : ts) out.push_back(t.stage);
    return out;
}

bool has_flag(const std::vector<StageTranscript>& ts, const std::string& flag) {
    for (const auto& t : ts) {
        for (const auto& f : t.flags) {
            if (f == flag) return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("render replaces every occurrence of each placeholder") {
    CHECK(PromptLibrary::render("{a} and {a} then {b}", {{"a", "X"}, {"b", "Y"}}) ==
          "X and X then Y");
    CHECK(PromptLibrary::render("no placeholders", {{"a", "X"}}) == "no placeholders");
}

TEST_CASE("the library carries six stages and rejects unknown ones") {
    PromptLibrary lib;
    CHECK(PromptLibrary::stages().size() == 6);
    for (const auto& stage : PromptLibrary::stages()) {
        CHECK_FALSE(lib.at(stage).empty());
    }
    CHECK_THROWS_AS(lib.at("nope"), ConfigError);
    CHECK_THROWS_AS(lib.set("nope", "x"), ConfigError);
}

TEST_CASE("template files override the defaults stage by stage") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "lmchunk_prompts_test";
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "reflect.txt", std::ios::binary);
        out << "custom reflect {chunk}\n";
    }
    auto lib = PromptLibrary::from_directory(dir.string());
    CHECK(lib.at("reflect") == "custom reflect {chunk}");
    CHECK(lib.at("refine") == PromptLibrary().at("refine"));
    fs::remove_all(dir);
}

TEST_CASE("small documents treat every other chunk as fully related") {
    HashingEmbedder em;
    std::vector<Chunk> chunks = {make_chunk("alpha", 0), make_chunk("beta", 1),
                                 make_chunk("gamma", 2)};
    auto sets = relevance_preprocess(chunks, em, 1, 8000);
    REQUIRE(sets.size() == 3);
    for (const auto& set : sets) {
        CHECK(set.top_m == 2);
        REQUIRE(set.related.size() == 2);
        for (const auto& r : set.related) CHECK(r.cosine == 1.0);
    }
}

TEST_CASE("large documents rank related chunks by embedding cosine") {
    HashingEmbedder em;
    std::vector<Chunk> chunks = {make_chunk("the quick brown fox jumps", 0),
                                 make_chunk("the quick brown fox jumps", 1),
                                 make_chunk("zzzz qqqq kkkk wwww", 2)};
    auto sets = relevance_preprocess(chunks, em, 1, 10);  // force the embedding path
    REQUIRE(sets.size() == 3);
    CHECK(sets[0].top_m == 1);
    REQUIRE(sets[0].related.size() == 1);
    // The duplicate text wins for chunk 0.
    CHECK(sets[0].related[0].chunk_index == 1);
    CHECK(sets[0].related[0].cosine == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(relevance_preprocess({}, em, 1, 10), std::invalid_argument);
}

TEST_CASE("a sentinel reflection reports nothing missing") {
    PromptLibrary prompts;
    std::vector<StageTranscript> ts;
    for (const std::string answer : {"NONE", "none", " None. ", "No missing information."}) {
        ScriptedChatProvider chat({answer});
        ts.clear();
        auto items = reflect_missing("chunk text", {}, chat, prompts, ts);
        CHECK(items.empty());
        CHECK(chat.calls() == 1);
        REQUIRE(ts.size() == 1);
        CHECK(ts[0].stage == "reflect");
        CHECK(ts[0].flags.empty());
    }
}

TEST_CASE("numbered and bulleted reflections parse in order") {
    PromptLibrary prompts;
    std::vector<StageTranscript> ts;
    ScriptedChatProvider chat({"1. first fact\n2) second fact\n- third fact\nignored prose"});
    auto items = reflect_missing("chunk text", {}, chat, prompts, ts);
    REQUIRE(items.size() == 3);
    CHECK(items[0].description == "first fact");
    CHECK(items[1].description == "second fact");
    CHECK(items[2].description == "third fact");
}

TEST_CASE("related texts surface in the reflect prompt only when present") {
    PromptLibrary prompts;
    std::vector<StageTranscript> ts;
    ScriptedChatProvider chat({"NONE", "NONE"});
    reflect_missing("chunk text", {}, chat, prompts, ts);
    CHECK(ts[0].prompt.find("Related context:") == std::string::npos);
    reflect_missing("chunk text", {"neighbour text"}, chat, prompts, ts);
    CHECK(ts[1].prompt.find("Related context:") != std::string::npos);
    CHECK(ts[1].prompt.find("neighbour text") != std::string::npos);
}

TEST_CASE("an unparseable reflection earns one reprompt") {
    PromptLibrary prompts;

    // Retry succeeds: the second answer parses, no flag.
    std::vector<StageTranscript> ts;
    ScriptedChatProvider retryOk({"gibberish with no items", "1. recovered item"});
    auto items = reflect_missing("chunk", {}, retryOk, prompts, ts);
    REQUIRE(items.size() == 1);
    CHECK(items[0].description == "recovered item");
    CHECK(retryOk.calls() == 2);
    CHECK_FALSE(has_flag(ts, "reflect_malformed"));

    // Retry also fails: empty result, flagged.
    ts.clear();
    ScriptedChatProvider retryBad({"gibberish", "more gibberish"});
    items = reflect_missing("chunk", {}, retryBad, prompts, ts);
    CHECK(items.empty());
    CHECK(retryBad.calls() == 2);
    CHECK(has_flag(ts, "reflect_malformed"));

    // Retry resolves to the sentinel: empty but clean.
    ts.clear();
    ScriptedChatProvider retrySentinel({"gibberish", "NONE"});
    items = reflect_missing("chunk", {}, retrySentinel, prompts, ts);
    CHECK(items.empty());
    CHECK_FALSE(has_flag(ts, "reflect_malformed"));
}

TEST_CASE("refine scores items one call apiece and filters at the threshold") {
    PromptLibrary prompts;
    std::vector<StageTranscript> ts;
    ScriptedChatProvider chat({"9", "Score: 3 out of 10", "6"});
    std::vector<MissingItem> items(3);
    items[0].description = "first";
    items[1].description = "second";
    items[2].description = "third";
    auto scored = refine_missing(items, "chunk", chat, 6.0, prompts, ts);
    REQUIRE(scored.size() == 3);
    CHECK(chat.calls() == 3);
    CHECK(scored[0].accepted);
    CHECK(scored[0].score == 9.0);
    CHECK_FALSE(scored[1].accepted);
    CHECK(scored[1].score == 3.0);
    CHECK(scored[2].accepted);  // a tie with the threshold passes
    CHECK(ts.size() == 3);
}

TEST_CASE("an unscorable refine response rejects the item and flags it") {
    PromptLibrary prompts;
    std::vector<StageTranscript> ts;
    ScriptedChatProvider chat({"hard to say"});
    std::vector<MissingItem> items(1);
    items[0].description = "first";
    auto scored = refine_missing(items, "chunk", chat, 6.0, prompts, ts);
    CHECK_FALSE(scored[0].accepted);
    CHECK(has_flag(ts, "refine_unparseable_score"));

    // Out-of-range numbers are unscorable too.
    ts.clear();
    ScriptedChatProvider chat2({"42"});
    scored = refine_missing(items, "chunk", chat2, 6.0, prompts, ts);
    CHECK_FALSE(scored[0].accepted);
    CHECK(has_flag(ts, "refine_unparseable_score"));
}

TEST_CASE("completion without accepted items never calls the model") {
    PromptLibrary prompts;
    ScriptedChatProvider chat;
    auto record = complete_rewrite(make_chunk("original body"), {}, chat, prompts, {});
    CHECK(record.rewritten == "original body");
    CHECK(chat.calls() == 0);
}

TEST_CASE("completion integrates the accepted items") {
    PromptLibrary prompts;
    ScriptedChatProvider chat({"rewritten and richer body"});
    std::vector<MissingItem> accepted(2);
    accepted[0].description = "fact A";
    accepted[1].description = "fact B";
    auto record = complete_rewrite(make_chunk("original"), accepted, chat, prompts, {});
    CHECK(record.rewritten == "rewritten and richer body");
    REQUIRE(chat.calls() == 1);
    CHECK(chat.prompts()[0].find("1. fact A") != std::string::npos);
    CHECK(chat.prompts()[0].find("2. fact B") != std::string::npos);

    // An empty response falls back to the original text.
    ScriptedChatProvider empty({"   "});
    record = complete_rewrite(make_chunk("original"), accepted, empty, prompts, {});
    CHECK(record.rewritten == "original");
    CHECK(has_flag(record.provenance, "complete_empty_output"));
}

TEST_CASE("rewrite_chunk runs reflect, refine and complete in order") {
    CompletionOptions options;
    ScriptedChatProvider chat({"1. a missing premise", "8", "the rewritten chunk"});
    auto record = rewrite_chunk(make_chunk("the original chunk"), {}, chat, options);
    CHECK(record.rewritten == "the rewritten chunk");
    CHECK(chat.calls() == 3);
    CHECK(stage_names(record.provenance) ==
          std::vector<std::string>{"reflect", "refine", "complete"});
    REQUIRE(record.reflections.size() == 1);
    CHECK(record.reflections[0].accepted);
    CHECK(record.reflections[0].score == 8.0);
}

TEST_CASE("rewrite_chunk keeps the original when reflection finds nothing") {
    CompletionOptions options;
    ScriptedChatProvider chat({"NONE"});
    auto record = rewrite_chunk(make_chunk("stable text"), {}, chat, options);
    CHECK(record.rewritten == "stable text");
    CHECK(chat.calls() == 1);
    CHECK(stage_names(record.provenance) == std::vector<std::string>{"reflect"});
}

TEST_CASE("rewrite_chunk keeps the original when every item is filtered out") {
    CompletionOptions options;
    ScriptedChatProvider chat({"1. weak idea", "2"});
    auto record = rewrite_chunk(make_chunk("stable text"), {}, chat, options);
    CHECK(record.rewritten == "stable text");
    CHECK(chat.calls() == 2);  // complete is skipped
    CHECK(stage_names(record.provenance) == std::vector<std::string>{"reflect", "refine"});
    REQUIRE(record.reflections.size() == 1);
    CHECK_FALSE(record.reflections[0].accepted);
}

TEST_CASE("summarize makes exactly three calls and fuses the candidates") {
    PromptLibrary prompts;
    ScriptedChatProvider chat({"global view", "local view", "fused view"});
    auto record = summarize("chunk body", "whole document", chat, prompts, 120);
    CHECK(chat.calls() == 3);
    CHECK(record.summary.global_summary == "global view");
    CHECK(record.summary.local_summary == "local view");
    CHECK(record.summary.fused == "fused view");
    CHECK(stage_names(record.transcripts) ==
          std::vector<std::string>{"summary_global", "summary_local", "summary_fuse"});
    CHECK(record.transcripts[0].prompt.find("whole document") != std::string::npos);
    CHECK(record.transcripts[1].prompt.find("whole document") == std::string::npos);
    CHECK(record.transcripts[2].prompt.find("global view") != std::string::npos);
    CHECK(record.transcripts[2].prompt.find("local view") != std::string::npos);
}

TEST_CASE("an empty fusion falls back to the local summary") {
    PromptLibrary prompts;
    ScriptedChatProvider chat({"global view", "local view", ""});
    auto record = summarize("chunk body", "doc", chat, prompts, 120);
    CHECK(record.summary.fused == "local view");
    CHECK(has_flag(record.transcripts, "fuse_empty_output"));
}

TEST_CASE("an overlong fusion is truncated to the cap") {
    PromptLibrary prompts;
    ScriptedChatProvider chat({"g", "l", std::string(300, 'x')});
    auto record = summarize("chunk body", "doc", chat, prompts, 120);
    CHECK(record.summary.fused == std::string(120, 'x'));
    CHECK(has_flag(record.transcripts, "fused_truncated"));

    CHECK_THROWS_AS(summarize("", "doc", chat, prompts, 120), std::invalid_argument);
    CHECK_THROWS_AS(summarize("x", "doc", chat, prompts, 0), std::invalid_argument);
}
