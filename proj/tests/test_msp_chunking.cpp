#include <doctest.h>

#include <stdexcept>

#include "lmchunk/errors.hpp"
#include "lmchunk/msp_chunking.hpp"
#include "lmchunk/scripted.hpp"

using namespace lmchunk;

namespace {

Document doc3() {
    Document d;
    d.id = "d";
    d.text = "Alpha one. Beta two. Gamma three.";
    return d;
}

}  // namespace

TEST_CASE("prompt variants parse and reject unknown names") {
    CHECK(prompt_variant_from_string("regular") == PromptVariant::regular);
    CHECK(prompt_variant_from_string("precise") == PromptVariant::precise);
    CHECK_THROWS_AS(prompt_variant_from_string("fancy"), ConfigError);
}

TEST_CASE("the regular prompt substitutes every placeholder occurrence") {
    const std::string p = build_prompt("B.", "A.", PromptVariant::regular);
    CHECK(p.rfind("This is a text chunking task. You are a text analysis expert.", 0) == 0);
    CHECK(p.find("1. Split A.+B. into A. and B. two parts;") != std::string::npos);
    CHECK(p.find("2. Keep A.+B. unsplit in its original form;") != std::string::npos);
    CHECK(p.find("Please answer 1 or 2.") != std::string::npos);
    CHECK(p.find("sentence1") == std::string::npos);
    CHECK(p.find("sentence2") == std::string::npos);
}

TEST_CASE("the precise prompt keeps its grouping instruction") {
    const std::string p = build_prompt("B.", "A.", PromptVariant::precise);
    CHECK(p.find("group two related paragraphs together") != std::string::npos);
    CHECK(p.find("A.+B.") != std::string::npos);
}

TEST_CASE("build_prompt rejects empty inputs") {
    CHECK_THROWS_AS(build_prompt("", "A.", PromptVariant::regular), std::invalid_argument);
    CHECK_THROWS_AS(build_prompt("B.", "", PromptVariant::regular), std::invalid_argument);
}

TEST_CASE("the margin state tracks the running mean") {
    MarginState state;
    CHECK(state.theta == 0.0);
    state.observe(0.8);
    CHECK(state.theta == doctest::Approx(0.8).epsilon(1e-12));
    state.observe(0.2);
    CHECK(state.theta == doctest::Approx(0.5).epsilon(1e-12));
    state.observe(-0.4);
    CHECK(state.theta == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("msp_step compares against theta before observing") {
    ScriptedMarginProvider provider({0.4, 0.3, 0.4});
    MarginState state;
    Sentence s;
    s.index = 1;
    s.text = "Beta.";

    // First margin 0.4 >= initial theta 0 -> split; theta becomes 0.4.
    auto d = msp_step(s, "Alpha.", state, provider, PromptVariant::regular);
    CHECK(d.split);
    CHECK(d.margin == 0.4);
    CHECK(state.theta == doctest::Approx(0.4));

    // 0.3 < 0.4 -> keep; theta becomes 0.35.
    d = msp_step(s, "Alpha.", state, provider, PromptVariant::regular);
    CHECK_FALSE(d.split);
    CHECK(state.theta == doctest::Approx(0.35));

    // 0.4 >= 0.35 -> split again.
    d = msp_step(s, "Alpha.", state, provider, PromptVariant::regular);
    CHECK(d.split);
}

TEST_CASE("a tie with theta splits") {
    ScriptedMarginProvider provider({0.5, 0.5});
    MarginState state;
    Sentence s;
    s.text = "X.";
    CHECK(msp_step(s, "C.", state, provider, PromptVariant::regular).split);
    // theta is now exactly 0.5; an equal margin still splits.
    CHECK(msp_step(s, "C.", state, provider, PromptVariant::regular).split);
}

TEST_CASE("split decisions close the chunk before the current sentence") {
    ScriptedMarginProvider provider({1.0, -1.0});
    auto result = msp_chunk(doc3(), provider, MspOptions{});
    REQUIRE(result.sentences.size() == 3);
    REQUIRE(result.decisions.size() == 2);
    CHECK(result.decisions[0].split);
    CHECK_FALSE(result.decisions[1].split);
    REQUIRE(result.metas.size() == 2);
    CHECK(result.metas[0].start == 0);
    CHECK(result.metas[0].end == 1);
    CHECK(result.metas[1].start == 1);
    CHECK(result.metas[1].end == 3);
}

TEST_CASE("a two-sentence document with a losing margin stays whole") {
    Document d;
    d.id = "d2";
    d.text = "Alpha one. Beta two.";
    ScriptedMarginProvider provider({-1.0});
    auto result = msp_chunk(d, provider, MspOptions{});
    REQUIRE(result.metas.size() == 1);
    CHECK(result.metas[0].start == 0);
    CHECK(result.metas[0].end == 2);
}

TEST_CASE("a constant minimal margin ties with its own mean and splits later") {
    // Step 1: -1 < theta 0 -> keep; theta -1. Step 2: -1 >= -1 -> split.
    ScriptedMarginProvider provider({-1.0, -1.0});
    auto result = msp_chunk(doc3(), provider, MspOptions{});
    REQUIRE(result.metas.size() == 2);
    CHECK(result.metas[0].end == 2);
    CHECK(result.metas[1].start == 2);
}

TEST_CASE("a single-sentence document asks no questions") {
    Document d;
    d.id = "one";
    d.text = "Only sentence here.";
    ScriptedMarginProvider provider({});
    auto result = msp_chunk(d, provider, MspOptions{});
    CHECK(result.decisions.empty());
    CHECK(provider.calls() == 0);
    REQUIRE(result.metas.size() == 1);
}

TEST_CASE("context covers the open chunk and can be windowed") {
    class PromptLog final : public LogprobProvider {
    public:
        std::vector<std::string> prompts;
        LogprobResponse logprobs(const LogprobRequest&) override {
            throw ProviderUnavailable("margins only");
        }
        double choice_margin(const ChoiceProbRequest& req) override {
            prompts.push_back(req.prompt);
            return -1.0;  // step 1 keeps, step 2 ties and splits
        }
    } provider;

    MspOptions options;
    auto result = msp_chunk(doc3(), provider, options);
    REQUIRE(provider.prompts.size() == 2);
    // Second decision sees the whole open chunk as context.
    CHECK(provider.prompts[1].find("Alpha one. Beta two.+Gamma three.") != std::string::npos);

    // Restricting the context window to one sentence shrinks the prompt.
    provider.prompts.clear();
    options.context_sentences = 1;
    msp_chunk(doc3(), provider, options);
    REQUIRE(provider.prompts.size() == 2);
    CHECK(provider.prompts[1].find("Beta two.+Gamma three.") != std::string::npos);
    CHECK(provider.prompts[1].find("Alpha one. Beta two.+") == std::string::npos);
}

TEST_CASE("long contexts are left-truncated in code points") {
    class PromptLog final : public LogprobProvider {
    public:
        std::vector<std::string> prompts;
        LogprobResponse logprobs(const LogprobRequest&) override {
            throw ProviderUnavailable("margins only");
        }
        double choice_margin(const ChoiceProbRequest& req) override {
            prompts.push_back(req.prompt);
            return -1.0;
        }
    } provider;

    MspOptions options;
    options.max_context_chars = 4;
    auto result = msp_chunk(doc3(), provider, options);
    REQUIRE(provider.prompts.size() == 2);
    // "Alpha one." keeps only its last four characters.
    CHECK(provider.prompts[0].find("one.+Beta two.") != std::string::npos);
    CHECK(provider.prompts[0].find("Alpha") == std::string::npos);
}

TEST_CASE("options are validated") {
    ScriptedMarginProvider provider({});
    MspOptions bad;
    bad.context_sentences = -1;
    CHECK_THROWS_AS(msp_chunk(doc3(), provider, bad), ConfigError);
    bad = MspOptions{};
    bad.max_context_chars = 0;
    CHECK_THROWS_AS(msp_chunk(doc3(), provider, bad), ConfigError);
}

TEST_CASE("identical scripts give identical chunkings") {
    ScriptedMarginProvider p1({0.9, -0.9, 0.5, -0.5});
    ScriptedMarginProvider p2({0.9, -0.9, 0.5, -0.5});
    Document d;
    d.id = "d5";
    d.text = "A one. B two. C three. D four. E five.";
    auto r1 = msp_chunk(d, p1, MspOptions{});
    auto r2 = msp_chunk(d, p2, MspOptions{});
    REQUIRE(r1.metas.size() == r2.metas.size());
    for (std::size_t i = 0; i < r1.metas.size(); ++i) {
        CHECK(r1.metas[i].start == r2.metas[i].start);
        CHECK(r1.metas[i].end == r2.metas[i].end);
    }
}
