#include "lmchunk/ppl_chunking.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "lmchunk/errors.hpp"
#include "lmchunk/segmentation.hpp"

namespace lmchunk {

namespace {

void validate_window(const WindowPolicy& window) {
    if (window.max_context_tokens < 1) {
        throw std::invalid_argument("max_context_tokens must be >= 1");
    }
    if (!(window.evict_fraction > 0.0 && window.evict_fraction <= 1.0)) {
        throw std::invalid_argument("evict_fraction must be in (0, 1]");
    }
}

void evict(std::vector<std::string>& prefix_tokens, const WindowPolicy& window) {
    while (static_cast<int>(prefix_tokens.size()) > window.max_context_tokens) {
        const auto drop = static_cast<std::size_t>(
            std::ceil(window.evict_fraction * static_cast<double>(prefix_tokens.size())));
        prefix_tokens.erase(prefix_tokens.begin(),
                            prefix_tokens.begin() + static_cast<std::ptrdiff_t>(drop));
    }
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) out += t;
    return out;
}

}  // namespace

std::vector<double> sentence_ppl(const std::vector<Sentence>& sentences,
                                 LogprobProvider& provider,
                                 const WindowPolicy& window,
                                 const std::string& separator) {
    validate_window(window);
    std::vector<double> values;
    values.reserve(sentences.size());
    std::vector<std::string> prefix_tokens;
    for (const auto& sentence : sentences) {
        evict(prefix_tokens, window);
        LogprobRequest req;
        req.context = join_tokens(prefix_tokens);
        req.target = sentence.text;
        req.max_context_tokens = window.max_context_tokens;
        LogprobResponse resp;
        try {
            resp = provider.logprobs(req);
        } catch (const ContextOverflow&) {
            if (prefix_tokens.empty()) throw;
            prefix_tokens.clear();
            req.context.clear();
            resp = provider.logprobs(req);
        }
        values.push_back(resp.perplexity());
        for (const auto& tl : resp.token_logprobs) prefix_tokens.push_back(tl.token);
        if (!separator.empty() && !prefix_tokens.empty()) {
            prefix_tokens.back() += separator;
        }
    }
    return values;
}

std::vector<int> detect_minima(const std::vector<double>& values, double theta) {
    if (theta < 0.0) throw std::invalid_argument("theta must be >= 0");
    std::vector<int> minima;
    if (values.size() < 3) return minima;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        const double left_drop = values[i - 1] - values[i];
        const double right_drop = values[i + 1] - values[i];
        const bool two_sided = values[i - 1] > values[i] && values[i + 1] > values[i] &&
                               std::max(left_drop, right_drop) > theta;
        const bool right_equal =
            left_drop > theta && std::fabs(values[i + 1] - values[i]) <= kMinimaTieEps;
        if (two_sided || right_equal) minima.push_back(static_cast<int>(i));
    }
    return minima;
}

std::vector<MetaChunk> metas_from_boundaries(const std::vector<Sentence>& sentences,
                                             const std::vector<int>& boundaries) {
    std::vector<MetaChunk> metas;
    const int n = static_cast<int>(sentences.size());
    int start = 0;
    auto close = [&](int end) {
        MetaChunk meta;
        meta.start = start;
        meta.end = end;
        long len = 0;
        for (int i = start; i < end; ++i) len += sentences[static_cast<std::size_t>(i)].char_len;
        meta.char_len = len;
        metas.push_back(meta);
        start = end;
    };
    for (int b : boundaries) {
        if (b + 1 <= start || b + 1 > n) continue;
        close(b + 1);
    }
    if (start < n) close(n);
    return metas;
}

PplChunkResult ppl_chunk(const Document& doc, double theta,
                         LogprobProvider& provider, const WindowPolicy& window) {
    PplChunkResult result;
    result.sentences = split_sentences(doc);
    const std::string sep = sentence_separator(resolve_language(doc.text, doc.language));
    result.trace.values = sentence_ppl(result.sentences, provider, window, sep);
    result.trace.theta = theta;
    result.trace.minima = detect_minima(result.trace.values, theta);
    result.metas = metas_from_boundaries(result.sentences, result.trace.minima);
    return result;
}

}  // namespace lmchunk
