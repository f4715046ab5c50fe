#include "lmchunk/openai_client.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "lmchunk/errors.hpp"

namespace lmchunk {

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* value = std::getenv(name);
    return value && *value ? std::string(value) : fallback;
}

std::string role_env(const std::string& role, const std::string& suffix) {
    std::string upper = role;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return "LMCHUNK_" + upper + "_" + suffix;
}

bool mentions_context_overflow(const std::string& message) {
    std::string lower = message;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return lower.find("context length") != std::string::npos ||
           lower.find("context_length") != std::string::npos ||
           lower.find("maximum context") != std::string::npos ||
           lower.find("context window") != std::string::npos;
}

}  // namespace

struct OpenAiClient::Impl {
    OpenAiConfig config;
    std::string host;         // scheme://authority for httplib
    std::string path_prefix;  // e.g. /v1

    explicit Impl(OpenAiConfig cfg) : config(std::move(cfg)) {
        if (config.base_url.empty()) throw ConfigError("provider base URL is empty");
        if (config.max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
        std::string url = config.base_url;
        while (!url.empty() && url.back() == '/') url.pop_back();
        const auto scheme_end = url.find("://");
        const auto path_start =
            url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
        if (path_start == std::string::npos) {
            host = url;
        } else {
            host = url.substr(0, path_start);
            path_prefix = url.substr(path_start);
        }
    }

    httplib::Client make_client() const {
        httplib::Client client(host);
        const auto timeout = std::chrono::milliseconds(
            static_cast<long long>(config.timeout_seconds * 1000.0));
        client.set_connection_timeout(timeout);
        client.set_read_timeout(timeout);
        client.set_write_timeout(timeout);
        if (!config.api_key.empty()) client.set_bearer_token_auth(config.api_key);
        return client;
    }

    // POSTs with retries on transport errors, 429 and 5xx. Other statuses
    // surface immediately; 400s describing an overlong prompt become
    // ContextOverflow.
    nlohmann::json post_json(const std::string& path, const nlohmann::json& body) {
        const std::string payload = body.dump();
        std::string last_error;
        int backoff_ms = config.backoff_initial_ms;
        for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
            if (attempt > 1) {
                std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
                backoff_ms *= 2;
            }
            auto client = make_client();
            auto result = client.Post(path_prefix + path, payload, "application/json");
            if (!result) {
                last_error = "transport error: " + httplib::to_string(result.error());
                continue;
            }
            if (result->status == 429 || result->status >= 500) {
                last_error = "HTTP " + std::to_string(result->status);
                continue;
            }
            if (result->status < 200 || result->status >= 300) {
                std::string detail = result->body;
                try {
                    auto parsed = nlohmann::json::parse(result->body);
                    if (parsed.contains("error") && parsed["error"].contains("message")) {
                        detail = parsed["error"]["message"].get<std::string>();
                    }
                } catch (const nlohmann::json::parse_error&) {
                }
                if (result->status == 400 && mentions_context_overflow(detail)) {
                    throw ContextOverflow(detail);
                }
                throw ProviderUnavailable("HTTP " + std::to_string(result->status) + ": " +
                                          detail);
            }
            try {
                return nlohmann::json::parse(result->body);
            } catch (const nlohmann::json::parse_error& e) {
                throw ProviderUnavailable(std::string("bad JSON from provider: ") + e.what());
            }
        }
        throw ProviderUnavailable("request to " + host + path_prefix + path + " failed after " +
                                  std::to_string(config.max_attempts) + " attempts (" +
                                  last_error + ")");
    }
};

OpenAiClient::OpenAiClient(OpenAiConfig config)
    : impl_(std::make_unique<Impl>(std::move(config))) {}

OpenAiClient::~OpenAiClient() = default;
OpenAiClient::OpenAiClient(OpenAiClient&&) noexcept = default;
OpenAiClient& OpenAiClient::operator=(OpenAiClient&&) noexcept = default;

OpenAiConfig OpenAiClient::config_from_env(const std::string& role) {
    OpenAiConfig config;
    config.base_url = env_or(role_env(role, "BASE_URL").c_str(),
                             env_or("LMCHUNK_BASE_URL", ""));
    config.api_key =
        env_or(role_env(role, "API_KEY").c_str(), env_or("LMCHUNK_API_KEY", ""));
    config.model = env_or(role_env(role, "MODEL").c_str(), env_or("LMCHUNK_MODEL", ""));
    const std::string timeout = env_or("LMCHUNK_TIMEOUT_SECONDS", "");
    if (!timeout.empty()) {
        try {
            config.timeout_seconds = std::stod(timeout);
        } catch (const std::exception&) {
            throw ConfigError("LMCHUNK_TIMEOUT_SECONDS is not a number: " + timeout);
        }
    }
    if (config.base_url.empty()) {
        throw ConfigError("no base URL: set " + role_env(role, "BASE_URL") +
                          " or LMCHUNK_BASE_URL");
    }
    return config;
}

OpenAiClient OpenAiClient::from_env(const std::string& role) {
    return OpenAiClient(config_from_env(role));
}

const OpenAiConfig& OpenAiClient::config() const { return impl_->config; }

LogprobResponse OpenAiClient::logprobs(const LogprobRequest& req) {
    if (req.target.empty()) throw std::invalid_argument("logprobs target must be non-empty");
    nlohmann::json body = {
        {"model", impl_->config.model},
        {"prompt", req.context + req.target},
        {"max_tokens", 0},
        {"echo", true},
        {"logprobs", 0},
    };
    const nlohmann::json reply = impl_->post_json("/completions", body);
    if (!reply.contains("choices") || reply["choices"].empty()) {
        throw ProviderUnavailable("completions reply carries no choices");
    }
    const auto& choice = reply["choices"][0];
    if (!choice.contains("logprobs") || choice["logprobs"].is_null()) {
        throw ProviderUnavailable("completions reply carries no logprobs");
    }
    const auto& lp = choice["logprobs"];
    const auto& tokens = lp["tokens"];
    const auto& token_logprobs = lp["token_logprobs"];
    const auto& offsets = lp["text_offset"];
    if (tokens.size() != token_logprobs.size() || tokens.size() != offsets.size()) {
        throw ProviderUnavailable("completions logprob arrays disagree in length");
    }
    const std::size_t context_bytes = req.context.size();
    LogprobResponse response;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string token = tokens[i].get<std::string>();
        const auto offset = offsets[i].get<std::size_t>();
        if (offset + token.size() <= context_bytes) continue;  // pure context token
        if (token_logprobs[i].is_null()) continue;  // first token has no score
        response.token_logprobs.push_back({token, token_logprobs[i].get<double>()});
    }
    if (response.token_logprobs.empty()) {
        throw ProviderUnavailable("provider returned no scored target tokens");
    }
    return response;
}

double OpenAiClient::choice_margin(const ChoiceProbRequest& req) {
    if (req.prompt.empty()) throw std::invalid_argument("choice prompt must be non-empty");
    auto score = [&](const std::string& choice) {
        LogprobRequest lp;
        lp.context = req.prompt;
        lp.target = choice;
        try {
            return logprobs(lp).sum_logprob();
        } catch (const ProviderUnavailable& e) {
            if (std::string(e.what()).find("no scored target tokens") != std::string::npos) {
                throw ChoiceTokenizationError("cannot score choice \"" + choice +
                                              "\" as a continuation");
            }
            throw;
        }
    };
    const double first = score(req.choices.first);
    const double second = score(req.choices.second);
    return renormalized_margin(first, second);
}

std::string OpenAiClient::chat(const std::string& prompt, const DecodingParams& decoding) {
    if (prompt.empty()) throw std::invalid_argument("chat prompt must be non-empty");
    nlohmann::json body = {
        {"model", impl_->config.model},
        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
        {"temperature", decoding.temperature},
        {"top_p", decoding.top_p},
        {"top_k", decoding.top_k},
        {"max_tokens", decoding.max_new_tokens},
    };
    const nlohmann::json reply = impl_->post_json("/chat/completions", body);
    if (!reply.contains("choices") || reply["choices"].empty()) {
        throw ProviderUnavailable("chat reply carries no choices");
    }
    const auto& message = reply["choices"][0]["message"];
    if (!message.contains("content") || message["content"].is_null()) return "";
    return message["content"].get<std::string>();
}

std::vector<double> OpenAiClient::embed(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("embed text must be non-empty");
    nlohmann::json body = {
        {"model", impl_->config.model},
        {"input", text},
    };
    const nlohmann::json reply = impl_->post_json("/embeddings", body);
    if (!reply.contains("data") || reply["data"].empty() ||
        !reply["data"][0].contains("embedding")) {
        throw ProviderUnavailable("embeddings reply carries no vector");
    }
    return reply["data"][0]["embedding"].get<std::vector<double>>();
}

}  // namespace lmchunk
