#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lmchunk/provider.hpp"

namespace lmchunk {

struct OpenAiConfig {
    std::string base_url;  // scheme://host[:port][/path-prefix]
    std::string api_key;
    std::string model;
    double timeout_seconds = 60.0;
    int max_attempts = 3;
    int backoff_initial_ms = 500;
};

// OpenAI-compatible HTTP backend. Logprobs ride the completions endpoint
// with echo enabled so the prompt's own tokens come back scored; chat uses
// chat/completions; embed uses embeddings. Transport failures, 429 and 5xx
// responses are retried with exponential backoff before giving up.
class OpenAiClient final : public LogprobProvider, public ChatProvider, public EmbedProvider {
public:
    explicit OpenAiClient(OpenAiConfig config);
    ~OpenAiClient() override;

    OpenAiClient(OpenAiClient&&) noexcept;
    OpenAiClient& operator=(OpenAiClient&&) noexcept;

    // role is "logprob", "chat" or "embed"; reads LMCHUNK_<ROLE>_BASE_URL,
    // LMCHUNK_<ROLE>_API_KEY and LMCHUNK_<ROLE>_MODEL, falling back to the
    // unprefixed LMCHUNK_BASE_URL family, plus LMCHUNK_TIMEOUT_SECONDS.
    static OpenAiClient from_env(const std::string& role);
    static OpenAiConfig config_from_env(const std::string& role);

    LogprobResponse logprobs(const LogprobRequest& req) override;
    double choice_margin(const ChoiceProbRequest& req) override;
    std::string chat(const std::string& prompt, const DecodingParams& decoding) override;
    using ChatProvider::chat;
    std::vector<double> embed(const std::string& text) override;

    const OpenAiConfig& config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace lmchunk
