#include "lmchunk/scripted.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "lmchunk/errors.hpp"

namespace lmchunk {

ScriptedMarginProvider::ScriptedMarginProvider(std::vector<double> margins)
    : margins_(std::move(margins)) {
    for (double m : margins_) {
        if (!(m >= -1.0 && m <= 1.0)) {
            throw ConfigError("scripted margin out of [-1, 1]: " + std::to_string(m));
        }
    }
}

ScriptedMarginProvider ScriptedMarginProvider::from_json_text(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("bad margin script: ") + e.what());
    }
    if (j.is_object() && j.contains("margins")) j = j["margins"];
    if (!j.is_array()) throw ConfigError("margin script must be a JSON array");
    std::vector<double> margins;
    margins.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError("margin script entries must be numbers");
        margins.push_back(v.get<double>());
    }
    return ScriptedMarginProvider(std::move(margins));
}

ScriptedMarginProvider ScriptedMarginProvider::from_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open margin script: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

LogprobResponse ScriptedMarginProvider::logprobs(const LogprobRequest&) {
    throw ProviderUnavailable("scripted margin provider serves choice margins only");
}

double ScriptedMarginProvider::choice_margin(const ChoiceProbRequest&) {
    if (next_ >= margins_.size()) {
        throw ProviderUnavailable("margin script exhausted after " +
                                  std::to_string(margins_.size()) + " calls");
    }
    return margins_[next_++];
}

ScriptedChatProvider::ScriptedChatProvider(std::vector<std::string> responses)
    : responses_(std::move(responses)) {}

std::string ScriptedChatProvider::chat(const std::string& prompt, const DecodingParams&) {
    prompts_.push_back(prompt);
    if (next_ < responses_.size()) return responses_[next_++];
    return fallback;
}

}  // namespace lmchunk
