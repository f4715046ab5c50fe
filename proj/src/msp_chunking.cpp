#include "lmchunk/msp_chunking.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "lmchunk/errors.hpp"
#include "lmchunk/ppl_chunking.hpp"
#include "lmchunk/segmentation.hpp"
#include "lmchunk/utf8.hpp"

namespace lmchunk {

namespace {

constexpr const char* kRegularTemplate =
    "This is a text chunking task. You are a text analysis expert. Please choose one of the "
    "following two options based on the logical structure and semantic content of the provided "
    "sentence:\n"
    "1. Split sentence1+sentence2 into sentence1 and sentence2 two parts;\n"
    "2. Keep sentence1+sentence2 unsplit in its original form;\n"
    "Please answer 1 or 2.";

constexpr const char* kPreciseTemplate =
    "This is a text chunking task. You are a text analysis expert. Please group two related "
    "paragraphs together and separate unrelated paragraphs based on the logical structure and "
    "semantic content of the provided sentences. Choose one chunking method from the following "
    "two options according to the above requirements:\n"
    "1. Split sentence1+sentence2 into sentence1 and sentence2 two parts;\n"
    "2. Keep sentence1+sentence2 unsplit in its original form;\n"
    "Please answer 1 or 2.";

void replace_all(std::string& text, const std::string& needle, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), value);
        pos += value.size();
    }
}

// Keeps at most max_chars code points from the right.
std::string left_truncate(const std::string& text, long max_chars) {
    const std::size_t total = utf8::count(text);
    if (static_cast<long>(total) <= max_chars) return text;
    std::size_t drop = total - static_cast<std::size_t>(max_chars);
    std::size_t byte = 0;
    while (drop > 0 && byte < text.size()) {
        unsigned char c = static_cast<unsigned char>(text[byte]);
        byte += c < 0x80 ? 1 : c < 0xE0 ? (c < 0xC0 ? 1 : 2) : c < 0xF0 ? 3 : 4;
        if (byte > text.size()) byte = text.size();
        --drop;
    }
    return text.substr(byte);
}

}  // namespace

PromptVariant prompt_variant_from_string(const std::string& name) {
    if (name == "regular") return PromptVariant::regular;
    if (name == "precise") return PromptVariant::precise;
    throw ConfigError("unknown prompt variant: " + name);
}

void MarginState::observe(double margin) {
    history.push_back(margin);
    double sum = 0.0;
    for (double m : history) sum += m;
    theta = sum / static_cast<double>(history.size());
}

std::string build_prompt(const std::string& sentence2, const std::string& sentence1,
                         PromptVariant variant) {
    if (sentence1.empty() || sentence2.empty()) {
        throw std::invalid_argument("build_prompt requires non-empty texts");
    }
    std::string prompt =
        variant == PromptVariant::regular ? kRegularTemplate : kPreciseTemplate;
    replace_all(prompt, "sentence1", sentence1);
    replace_all(prompt, "sentence2", sentence2);
    return prompt;
}

SegDecision msp_step(const Sentence& x_i, const std::string& context,
                     MarginState& state, LogprobProvider& provider,
                     PromptVariant variant) {
    ChoiceProbRequest req;
    req.prompt = build_prompt(x_i.text, context, variant);
    req.choices = {"1", "2"};
    SegDecision decision;
    decision.sentence_index = x_i.index;
    decision.margin = provider.choice_margin(req);
    decision.split = decision.margin >= state.theta;
    state.observe(decision.margin);
    return decision;
}

MspChunkResult msp_chunk_sentences(std::vector<Sentence> sentences,
                                   const std::string& separator,
                                   LogprobProvider& provider, const MspOptions& options) {
    if (options.context_sentences < 0) {
        throw ConfigError("context_sentences must be >= 0");
    }
    if (options.max_context_chars < 1) {
        throw ConfigError("max_context_chars must be >= 1");
    }
    MspChunkResult result;
    result.sentences = std::move(sentences);

    MarginState state;
    std::vector<int> boundaries;
    int open_start = 0;
    const int n = static_cast<int>(result.sentences.size());
    for (int i = 1; i < n; ++i) {
        int ctx_first = open_start;
        if (options.context_sentences > 0) {
            ctx_first = std::max(open_start, i - options.context_sentences);
        }
        std::string context = join_sentences(result.sentences, ctx_first, i, separator);
        context = left_truncate(context, options.max_context_chars);
        SegDecision decision =
            msp_step(result.sentences[static_cast<std::size_t>(i)], context, state,
                     provider, options.variant);
        result.decisions.push_back(decision);
        if (decision.split) {
            boundaries.push_back(i - 1);
            open_start = i;
        }
    }
    result.metas = metas_from_boundaries(result.sentences, boundaries);
    return result;
}

MspChunkResult msp_chunk(const Document& doc, LogprobProvider& provider,
                         const MspOptions& options) {
    std::vector<Sentence> sentences = split_sentences(doc);
    const std::string sep = sentence_separator(resolve_language(doc.text, doc.language));
    return msp_chunk_sentences(std::move(sentences), sep, provider, options);
}

}  // namespace lmchunk
