#include "lmchunk/reference_lm.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lmchunk/utf8.hpp"

namespace lmchunk {

namespace {

// Sentinel outside the Unicode range; used only as context padding.
constexpr char32_t kBos = 0x110000;

}  // namespace

ReferenceLm::ReferenceLm(std::string_view corpus, Params params) {
    params_ = params;
    if (params_.order < 1) throw std::invalid_argument("ReferenceLm: order must be >= 1");
    if (!(params_.add_k > 0.0)) throw std::invalid_argument("ReferenceLm: add_k must be > 0");
    train(utf8::decode(corpus));
}

ReferenceLm ReferenceLm::uniform(std::u32string_view vocab) { return uniform(vocab, Params{}); }

ReferenceLm ReferenceLm::uniform(std::u32string_view vocab, Params params) {
    if (vocab.empty()) throw std::invalid_argument("ReferenceLm: uniform vocab must be non-empty");
    ReferenceLm lm;
    lm.params_ = params;
    if (lm.params_.order < 1) throw std::invalid_argument("ReferenceLm: order must be >= 1");
    if (!(lm.params_.add_k > 0.0)) throw std::invalid_argument("ReferenceLm: add_k must be > 0");
    std::set<char32_t> uniq(vocab.begin(), vocab.end());
    lm.vocab_.assign(uniq.begin(), uniq.end());
    return lm;
}

void ReferenceLm::train(const std::u32string& corpus) {
    std::set<char32_t> uniq(corpus.begin(), corpus.end());
    vocab_.assign(uniq.begin(), uniq.end());

    const std::size_t ctx_len = static_cast<std::size_t>(params_.order - 1);
    std::u32string padded(ctx_len, kBos);
    padded += corpus;
    for (std::size_t i = ctx_len; i < padded.size(); ++i) {
        const std::u32string ctx = padded.substr(i - ctx_len, ctx_len);
        ++counts_[ctx][padded[i]];
        ++context_totals_[ctx];
    }
}

std::u32string ReferenceLm::context_window(std::u32string_view history) const {
    const std::size_t ctx_len = static_cast<std::size_t>(params_.order - 1);
    if (history.size() >= ctx_len) {
        return std::u32string(history.substr(history.size() - ctx_len));
    }
    std::u32string ctx(ctx_len - history.size(), kBos);
    ctx.append(history);
    return ctx;
}

double ReferenceLm::conditional(std::u32string_view context, char32_t next) const {
    const std::u32string ctx = context_window(context);
    long count = 0;
    long total = 0;
    if (auto it = counts_.find(ctx); it != counts_.end()) {
        if (auto jt = it->second.find(next); jt != it->second.end()) count = jt->second;
        total = context_totals_.at(ctx);
    }
    const double v = static_cast<double>(vocab_.size());
    return (static_cast<double>(count) + params_.add_k) /
           (static_cast<double>(total) + params_.add_k * v);
}

LogprobResponse ReferenceLm::logprobs(const LogprobRequest& req) {
    if (req.target.empty()) throw std::invalid_argument("logprobs: target must be non-empty");
    const std::u32string context = utf8::decode(req.context);
    const std::u32string target = utf8::decode(req.target);

    LogprobResponse resp;
    resp.token_logprobs.reserve(target.size());
    std::u32string history = context;
    for (char32_t cp : target) {
        TokenLogprob t;
        t.token = utf8::encode(std::u32string_view(&cp, 1));
        t.logprob = std::log(conditional(history, cp));
        resp.token_logprobs.push_back(std::move(t));
        history.push_back(cp);
    }
    return resp;
}

std::string ReferenceLm::chat(const std::string& prompt, const DecodingParams& decoding) {
    if (prompt.empty()) throw std::invalid_argument("chat: prompt must be non-empty");
    std::u32string history = utf8::decode(prompt);
    std::u32string out;
    for (int i = 0; i < decoding.max_new_tokens; ++i) {
        char32_t best = 0;
        double best_p = -1.0;
        for (char32_t c : vocab_) {
            const double p = conditional(history, c);
            if (p > best_p) {  // ties resolve to the smallest code point
                best_p = p;
                best = c;
            }
        }
        if (best_p < 0.0) break;  // empty vocabulary
        out.push_back(best);
        history.push_back(best);
    }
    return utf8::encode(out);
}

}  // namespace lmchunk
