#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lmchunk/provider.hpp"

namespace lmchunk {

// Deterministic character-level n-gram model with add-k smoothing. Serves as
// the offline logprob/chat provider for tests and fully local runs. Immutable
// after construction; safe to share across threads.
class ReferenceLm final : public LogprobProvider, public ChatProvider {
public:
    struct Params {
        int order = 3;      // n-gram order (context = order-1 characters)
        double add_k = 1.0; // smoothing constant, must be > 0
    };

    explicit ReferenceLm(std::string_view corpus) : ReferenceLm(corpus, Params{}) {}
    ReferenceLm(std::string_view corpus, Params params);

    // Uniform model over an explicit vocabulary: no counts, pure smoothing.
    static ReferenceLm uniform(std::u32string_view vocab);
    static ReferenceLm uniform(std::u32string_view vocab, Params params);

    LogprobResponse logprobs(const LogprobRequest& req) override;

    // Greedy n-gram continuation, `max_new_tokens` characters. Sampling
    // parameters other than max_new_tokens are ignored (tests only).
    std::string chat(const std::string& prompt, const DecodingParams& decoding) override;
    using ChatProvider::chat;

    // P(next | last order-1 code points of context), smoothed. Out-of-vocab
    // symbols receive the unseen-event mass add_k / (total + add_k * V).
    double conditional(std::u32string_view context, char32_t next) const;

    const std::vector<char32_t>& vocab() const { return vocab_; }
    int order() const { return params_.order; }

private:
    ReferenceLm() = default;
    void train(const std::u32string& corpus);
    std::u32string context_window(std::u32string_view history) const;

    Params params_;
    std::vector<char32_t> vocab_;  // sorted, unique
    // context (order-1 code points, BOS-padded) -> next code point -> count
    std::unordered_map<std::u32string, std::unordered_map<char32_t, long>> counts_;
    std::unordered_map<std::u32string, long> context_totals_;
};

}  // namespace lmchunk
