#pragma once

#include <map>
#include <string>
#include <vector>

#include "lmchunk/provider.hpp"
#include "lmchunk/types.hpp"

namespace lmchunk {

// Stage templates with {placeholder} substitution. Each stage can be
// overridden by a <stage>.txt file in a template directory.
class PromptLibrary {
public:
    PromptLibrary();

    static const std::vector<std::string>& stages();
    static PromptLibrary from_directory(const std::string& dir);

    const std::string& at(const std::string& stage) const;
    void set(const std::string& stage, std::string text);

    static std::string render(const std::string& tmpl,
                              const std::map<std::string, std::string>& values);

private:
    std::map<std::string, std::string> templates_;
};

struct StageTranscript {
    std::string stage;
    std::string prompt;
    std::string response;
    std::vector<std::string> flags;
};

struct RelatedChunk {
    int chunk_index = 0;
    double cosine = 0.0;
};

struct RelevanceSet {
    int chunk_index = 0;
    std::vector<RelatedChunk> related;  // sorted by cosine descending
    int top_m = 0;
};

struct MissingItem {
    std::string description;
    double score = 0.0;
    bool accepted = false;
};

struct RewriteRecord {
    Chunk original;
    std::vector<MissingItem> reflections;
    std::string rewritten;
    std::vector<StageTranscript> provenance;
};

struct ChunkSummary {
    std::string global_summary;
    std::string local_summary;
    std::string fused;
};

struct SummaryRecord {
    ChunkSummary summary;
    std::vector<StageTranscript> transcripts;
};

struct CompletionOptions {
    double accept_threshold = 6.0;
    long summary_cap_chars = 120;
    long relevance_budget_chars = 8000;
    int top_m = 3;
    PromptLibrary prompts;
};

// Ranks every other chunk by embedding cosine and keeps the top_m. Documents
// at or under budget_chars skip the embedding calls: every other chunk counts
// as related (cosine 1.0) and top_m widens to match.
std::vector<RelevanceSet> relevance_preprocess(const std::vector<Chunk>& chunks,
                                               EmbedProvider& embeddings, int top_m,
                                               long budget_chars = 8000);

// Asks the model what the chunk lost to segmentation. A bare sentinel
// ("NONE") response means nothing; anything unparseable earns one reprompt,
// then resolves to an empty, flagged result.
std::vector<MissingItem> reflect_missing(const std::string& chunk_text,
                                         const std::vector<std::string>& related_texts,
                                         ChatProvider& chat, const PromptLibrary& prompts,
                                         std::vector<StageTranscript>& transcripts);

// Scores each item 0-10 with one call apiece; accepted iff score >=
// accept_threshold. Unscorable responses reject the item and flag it.
std::vector<MissingItem> refine_missing(std::vector<MissingItem> items,
                                        const std::string& chunk_text, ChatProvider& chat,
                                        double accept_threshold, const PromptLibrary& prompts,
                                        std::vector<StageTranscript>& transcripts);

// Integrates accepted items into a rewritten chunk. No accepted items means
// no model call and rewritten == original. An empty model response falls
// back to the original text and is flagged.
RewriteRecord complete_rewrite(const Chunk& chunk, const std::vector<MissingItem>& accepted,
                               ChatProvider& chat, const PromptLibrary& prompts,
                               std::vector<StageTranscript> transcripts);

// Full three-stage rewriting pass over one chunk.
RewriteRecord rewrite_chunk(const Chunk& chunk, const std::vector<std::string>& related_texts,
                            ChatProvider& chat, const CompletionOptions& options);

// Exactly three calls: context-aware summary, local summary, fusion. Empty
// fusion output falls back to the local summary; the fused sentence is
// truncated to cap_chars code points when the model overruns.
SummaryRecord summarize(const std::string& chunk_text, const std::string& document_context,
                        ChatProvider& chat, const PromptLibrary& prompts, long cap_chars = 120);

}  // namespace lmchunk
