#pragma once

#include <string>
#include <vector>

#include "lmchunk/provider.hpp"

namespace lmchunk {

// Replays a fixed margin sequence; each choice_margin call consumes the next
// value. Fixture format: a JSON array of reals in [-1, 1], or an object
// {"margins": [...]}.
class ScriptedMarginProvider final : public LogprobProvider {
public:
    explicit ScriptedMarginProvider(std::vector<double> margins);

    static ScriptedMarginProvider from_json_text(const std::string& json_text);
    static ScriptedMarginProvider from_json_file(const std::string& path);

    LogprobResponse logprobs(const LogprobRequest& req) override;
    double choice_margin(const ChoiceProbRequest& req) override;

    int calls() const { return static_cast<int>(next_); }

private:
    std::vector<double> margins_;
    std::size_t next_ = 0;
};

// Replays a queue of chat responses and records every prompt.
class ScriptedChatProvider final : public ChatProvider {
public:
    ScriptedChatProvider() = default;
    explicit ScriptedChatProvider(std::vector<std::string> responses);

    std::string chat(const std::string& prompt, const DecodingParams& decoding) override;
    using ChatProvider::chat;

    void push(std::string response) { responses_.push_back(std::move(response)); }
    int calls() const { return static_cast<int>(prompts_.size()); }
    const std::vector<std::string>& prompts() const { return prompts_; }

    // Response once the queue is exhausted.
    std::string fallback = "";

private:
    std::vector<std::string> responses_;
    std::vector<std::string> prompts_;
    std::size_t next_ = 0;
};

}  // namespace lmchunk
