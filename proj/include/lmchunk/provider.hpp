#pragma once

#include <string>
#include <utility>
#include <vector>

namespace lmchunk {

struct LogprobRequest {
    std::string context;
    std::string target;
    int max_context_tokens = 4096;
};

struct TokenLogprob {
    std::string token;
    double logprob = 0.0;  // natural log
};

struct LogprobResponse {
    std::vector<TokenLogprob> token_logprobs;

    int token_count() const { return static_cast<int>(token_logprobs.size()); }
    double sum_logprob() const;
    // exp(mean negative log-likelihood) over the target tokens.
    double perplexity() const;
};

struct ChoiceProbRequest {
    std::string prompt;
    std::pair<std::string, std::string> choices;
};

struct DecodingParams {
    double temperature = 0.1;
    double top_p = 0.9;
    int top_k = 5;
    int max_new_tokens = 1280;
};

// Renormalizes two log-probabilities over the pair and returns
// P(first) - P(second), always in [-1, 1].
double renormalized_margin(double logprob_first, double logprob_second);

class LogprobProvider {
public:
    virtual ~LogprobProvider() = default;

    // One log-prob per target token, conditioned on the context followed by
    // the preceding target tokens.
    virtual LogprobResponse logprobs(const LogprobRequest& req) = 0;

    // P(k1 | prompt) - P(k2 | prompt), renormalized over exactly the two
    // choices. Default implementation scores each choice as a continuation.
    virtual double choice_margin(const ChoiceProbRequest& req);
};

class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual std::string chat(const std::string& prompt, const DecodingParams& decoding) = 0;
    std::string chat(const std::string& prompt) { return chat(prompt, DecodingParams{}); }
};

class EmbedProvider {
public:
    virtual ~EmbedProvider() = default;
    virtual std::vector<double> embed(const std::string& text) = 0;
};

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace lmchunk
