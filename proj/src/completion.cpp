#include "lmchunk/completion.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "lmchunk/errors.hpp"
#include "lmchunk/utf8.hpp"

namespace lmchunk {

namespace {

constexpr const char* kReflectTemplate =
    "You are improving text chunks produced by automatic segmentation. Read the chunk below "
    "and identify which premises, backgrounds, related facts, or conclusive statements it "
    "needs but lost to segmentation.\n"
    "{context}"
    "Chunk:\n"
    "{chunk}\n"
    "\n"
    "List each missing piece of information as a numbered item (1., 2., ...), one per line, "
    "most important first. If nothing essential is missing, answer exactly NONE.";

constexpr const char* kRefineTemplate =
    "A candidate piece of missing information was proposed for the chunk below. Rate how much "
    "adding it would improve the chunk's completeness and correctness on a scale from 0 to 10, "
    "where 0 means irrelevant or wrong and 10 means essential. Answer with the number only.\n"
    "\n"
    "Chunk:\n"
    "{chunk}\n"
    "\n"
    "Candidate:\n"
    "{item}";

constexpr const char* kCompleteTemplate =
    "Rewrite the chunk below into a contextually seamless version that integrates the missing "
    "information listed after it. Keep the original meaning, do not invent facts, and output "
    "only the rewritten chunk.\n"
    "\n"
    "Chunk:\n"
    "{chunk}\n"
    "\n"
    "Missing information:\n"
    "{items}";

constexpr const char* kSummaryGlobalTemplate =
    "Using the document context for background, write one short summary sentence of the chunk "
    "below. Output only the sentence.\n"
    "\n"
    "Document context:\n"
    "{context}\n"
    "\n"
    "Chunk:\n"
    "{chunk}";

constexpr const char* kSummaryLocalTemplate =
    "Write one short summary sentence of the chunk below using only its own content. Output "
    "only the sentence.\n"
    "\n"
    "Chunk:\n"
    "{chunk}";

constexpr const char* kSummaryFuseTemplate =
    "Fuse the two candidate summaries below into a single refined summary sentence of at most "
    "{cap} characters. Output only the sentence.\n"
    "\n"
    "Candidate A (context-aware):\n"
    "{global_summary}\n"
    "\n"
    "Candidate B (local):\n"
    "{local_summary}";

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
    return text.substr(begin, end - begin);
}

bool is_sentinel(const std::string& response) {
    std::string t = trim(response);
    if (!t.empty() && t.back() == '.') t.pop_back();
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return t == "none" || t == "no missing information";
}

// Strips a leading "1.", "2)", "-", "*" or bullet marker; returns the item
// text or empty when the line carries no marker.
std::string parse_item_line(const std::string& line) {
    std::string t = trim(line);
    if (t.empty()) return "";
    std::size_t pos = 0;
    while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
    if (pos > 0 && pos < t.size() && (t[pos] == '.' || t[pos] == ')' || t[pos] == ':')) {
        return trim(t.substr(pos + 1));
    }
    if (t[0] == '-' || t[0] == '*') return trim(t.substr(1));
    if (t.rfind("\xE2\x80\xA2", 0) == 0) return trim(t.substr(3));
    return "";
}

std::vector<MissingItem> parse_items(const std::string& response) {
    std::vector<MissingItem> items;
    std::istringstream lines(response);
    std::string line;
    while (std::getline(lines, line)) {
        std::string desc = parse_item_line(line);
        if (desc.empty()) continue;
        MissingItem item;
        item.description = std::move(desc);
        items.push_back(std::move(item));
    }
    return items;
}

bool parse_score(const std::string& response, double& score) {
    std::size_t pos = 0;
    while (pos < response.size() &&
           !std::isdigit(static_cast<unsigned char>(response[pos]))) {
        ++pos;
    }
    if (pos == response.size()) return false;
    try {
        score = std::stod(response.substr(pos));
    } catch (const std::exception&) {
        return false;
    }
    return score >= 0.0 && score <= 10.0;
}

}  // namespace

PromptLibrary::PromptLibrary() {
    templates_["reflect"] = kReflectTemplate;
    templates_["refine"] = kRefineTemplate;
    templates_["complete"] = kCompleteTemplate;
    templates_["summary_global"] = kSummaryGlobalTemplate;
    templates_["summary_local"] = kSummaryLocalTemplate;
    templates_["summary_fuse"] = kSummaryFuseTemplate;
}

const std::vector<std::string>& PromptLibrary::stages() {
    static const std::vector<std::string> names = {
        "reflect", "refine", "complete", "summary_global", "summary_local", "summary_fuse"};
    return names;
}

PromptLibrary PromptLibrary::from_directory(const std::string& dir) {
    PromptLibrary lib;
    for (const auto& stage : stages()) {
        std::ifstream in(dir + "/" + stage + ".txt", std::ios::binary);
        if (!in) continue;
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
        if (!text.empty()) lib.templates_[stage] = std::move(text);
    }
    return lib;
}

const std::string& PromptLibrary::at(const std::string& stage) const {
    auto it = templates_.find(stage);
    if (it == templates_.end()) throw ConfigError("unknown prompt stage: " + stage);
    return it->second;
}

void PromptLibrary::set(const std::string& stage, std::string text) {
    if (!templates_.count(stage)) throw ConfigError("unknown prompt stage: " + stage);
    templates_[stage] = std::move(text);
}

std::string PromptLibrary::render(const std::string& tmpl,
                                  const std::map<std::string, std::string>& values) {
    std::string out = tmpl;
    for (const auto& [key, value] : values) {
        const std::string needle = "{" + key + "}";
        std::size_t pos = 0;
        while ((pos = out.find(needle, pos)) != std::string::npos) {
            out.replace(pos, needle.size(), value);
            pos += value.size();
        }
    }
    return out;
}

std::vector<RelevanceSet> relevance_preprocess(const std::vector<Chunk>& chunks,
                                               EmbedProvider& embeddings, int top_m,
                                               long budget_chars) {
    if (chunks.empty()) throw std::invalid_argument("relevance_preprocess needs chunks");
    if (top_m < 0) throw std::invalid_argument("top_m must be >= 0");
    const int n = static_cast<int>(chunks.size());
    std::vector<RelevanceSet> sets(static_cast<std::size_t>(n));

    long total = 0;
    for (const auto& chunk : chunks) total += chunk.char_len;
    if (total <= budget_chars) {
        for (int i = 0; i < n; ++i) {
            auto& set = sets[static_cast<std::size_t>(i)];
            set.chunk_index = i;
            set.top_m = n - 1;
            for (int j = 0; j < n; ++j) {
                if (j != i) set.related.push_back({j, 1.0});
            }
        }
        return sets;
    }

    std::vector<std::vector<double>> vectors;
    vectors.reserve(chunks.size());
    for (const auto& chunk : chunks) vectors.push_back(embeddings.embed(chunk.body));

    for (int i = 0; i < n; ++i) {
        auto& set = sets[static_cast<std::size_t>(i)];
        set.chunk_index = i;
        set.top_m = top_m;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            set.related.push_back({j, cosine_similarity(vectors[static_cast<std::size_t>(i)],
                                                         vectors[static_cast<std::size_t>(j)])});
        }
        std::stable_sort(set.related.begin(), set.related.end(),
                         [](const RelatedChunk& a, const RelatedChunk& b) {
                             return a.cosine > b.cosine;
                         });
        if (static_cast<int>(set.related.size()) > top_m) {
            set.related.resize(static_cast<std::size_t>(top_m));
        }
    }
    return sets;
}

std::vector<MissingItem> reflect_missing(const std::string& chunk_text,
                                         const std::vector<std::string>& related_texts,
                                         ChatProvider& chat, const PromptLibrary& prompts,
                                         std::vector<StageTranscript>& transcripts) {
    if (chunk_text.empty()) throw std::invalid_argument("chunk text must be non-empty");
    std::string context;
    if (!related_texts.empty()) {
        context = "Related context:\n";
        for (const auto& text : related_texts) {
            context += text;
            context += '\n';
        }
        context += '\n';
    }
    const std::string prompt =
        PromptLibrary::render(prompts.at("reflect"), {{"chunk", chunk_text}, {"context", context}});

    StageTranscript transcript;
    transcript.stage = "reflect";
    transcript.prompt = prompt;
    transcript.response = chat.chat(prompt);

    std::vector<MissingItem> items;
    if (is_sentinel(transcript.response)) {
        transcripts.push_back(std::move(transcript));
        return items;
    }
    items = parse_items(transcript.response);
    if (items.empty()) {
        const std::string retry = chat.chat(prompt);
        transcript.response += "\n--- reprompt ---\n" + retry;
        if (!is_sentinel(retry)) {
            items = parse_items(retry);
            if (items.empty()) transcript.flags.push_back("reflect_malformed");
        }
    }
    transcripts.push_back(std::move(transcript));
    return items;
}

std::vector<MissingItem> refine_missing(std::vector<MissingItem> items,
                                        const std::string& chunk_text, ChatProvider& chat,
                                        double accept_threshold, const PromptLibrary& prompts,
                                        std::vector<StageTranscript>& transcripts) {
    for (auto& item : items) {
        const std::string prompt = PromptLibrary::render(
            prompts.at("refine"), {{"chunk", chunk_text}, {"item", item.description}});
        StageTranscript transcript;
        transcript.stage = "refine";
        transcript.prompt = prompt;
        transcript.response = chat.chat(prompt);
        double score = 0.0;
        if (parse_score(transcript.response, score)) {
            item.score = score;
            item.accepted = score >= accept_threshold;
        } else {
            item.score = 0.0;
            item.accepted = false;
            transcript.flags.push_back("refine_unparseable_score");
        }
        transcripts.push_back(std::move(transcript));
    }
    return items;
}

RewriteRecord complete_rewrite(const Chunk& chunk, const std::vector<MissingItem>& accepted,
                               ChatProvider& chat, const PromptLibrary& prompts,
                               std::vector<StageTranscript> transcripts) {
    RewriteRecord record;
    record.original = chunk;
    record.reflections = accepted;
    if (accepted.empty()) {
        record.rewritten = chunk.body;
        record.provenance = std::move(transcripts);
        return record;
    }
    std::string items;
    for (std::size_t i = 0; i < accepted.size(); ++i) {
        items += std::to_string(i + 1) + ". " + accepted[i].description + "\n";
    }
    const std::string prompt = PromptLibrary::render(
        prompts.at("complete"), {{"chunk", chunk.body}, {"items", items}});
    StageTranscript transcript;
    transcript.stage = "complete";
    transcript.prompt = prompt;
    transcript.response = chat.chat(prompt);
    std::string rewritten = trim(transcript.response);
    if (rewritten.empty()) {
        transcript.flags.push_back("complete_empty_output");
        rewritten = chunk.body;
    }
    record.rewritten = std::move(rewritten);
    transcripts.push_back(std::move(transcript));
    record.provenance = std::move(transcripts);
    return record;
}

RewriteRecord rewrite_chunk(const Chunk& chunk, const std::vector<std::string>& related_texts,
                            ChatProvider& chat, const CompletionOptions& options) {
    std::vector<StageTranscript> transcripts;
    std::vector<MissingItem> items =
        reflect_missing(chunk.body, related_texts, chat, options.prompts, transcripts);
    items = refine_missing(std::move(items), chunk.body, chat, options.accept_threshold,
                           options.prompts, transcripts);
    std::vector<MissingItem> accepted;
    for (const auto& item : items) {
        if (item.accepted) accepted.push_back(item);
    }
    RewriteRecord record =
        complete_rewrite(chunk, accepted, chat, options.prompts, std::move(transcripts));
    record.reflections = std::move(items);
    return record;
}

SummaryRecord summarize(const std::string& chunk_text, const std::string& document_context,
                        ChatProvider& chat, const PromptLibrary& prompts, long cap_chars) {
    if (chunk_text.empty()) throw std::invalid_argument("chunk text must be non-empty");
    if (cap_chars < 1) throw std::invalid_argument("cap_chars must be >= 1");
    SummaryRecord record;

    auto run = [&](const std::string& stage, const std::map<std::string, std::string>& values) {
        StageTranscript transcript;
        transcript.stage = stage;
        transcript.prompt = PromptLibrary::render(prompts.at(stage), values);
        transcript.response = chat.chat(transcript.prompt);
        record.transcripts.push_back(transcript);
        return trim(transcript.response);
    };

    record.summary.global_summary =
        run("summary_global", {{"chunk", chunk_text}, {"context", document_context}});
    record.summary.local_summary = run("summary_local", {{"chunk", chunk_text}});
    record.summary.fused = run("summary_fuse", {{"global_summary", record.summary.global_summary},
                                                {"local_summary", record.summary.local_summary},
                                                {"cap", std::to_string(cap_chars)}});
    if (record.summary.fused.empty()) {
        record.summary.fused = record.summary.local_summary;
        record.transcripts.back().flags.push_back("fuse_empty_output");
    }
    if (static_cast<long>(utf8::count(record.summary.fused)) > cap_chars) {
        record.summary.fused =
            utf8::truncate(record.summary.fused, static_cast<std::size_t>(cap_chars));
        record.transcripts.back().flags.push_back("fused_truncated");
    }
    return record;
}

}  // namespace lmchunk
