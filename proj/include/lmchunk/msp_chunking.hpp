#pragma once

#include <string>
#include <vector>

#include "lmchunk/provider.hpp"
#include "lmchunk/types.hpp"

namespace lmchunk {

enum class PromptVariant { regular, precise };

PromptVariant prompt_variant_from_string(const std::string& name);

// Running mean of all margins observed so far in one document.
struct MarginState {
    std::vector<double> history;
    double theta = 0.0;

    void observe(double margin);
};

struct SegDecision {
    int sentence_index = 0;
    double margin = 0.0;
    bool split = false;
};

// Fills the chunking prompt with sentence1 := context and sentence2 := the
// candidate sentence. Choice tokens are the literals "1" (split) and "2".
std::string build_prompt(const std::string& sentence2, const std::string& sentence1,
                         PromptVariant variant);

// One split/keep decision: split when margin >= theta, theta taken before the
// margin joins the history.
SegDecision msp_step(const Sentence& x_i, const std::string& context,
                     MarginState& state, LogprobProvider& provider,
                     PromptVariant variant);

struct MspOptions {
    PromptVariant variant = PromptVariant::regular;
    // Sentences of the open chunk used as context; 0 means all of them.
    int context_sentences = 0;
    // Left-truncation cap on the context, in code points.
    long max_context_chars = 4096;
};

struct MspChunkResult {
    std::vector<Sentence> sentences;
    std::vector<SegDecision> decisions;
    std::vector<MetaChunk> metas;
};

MspChunkResult msp_chunk(const Document& doc, LogprobProvider& provider,
                         const MspOptions& options);

// Same walk over pre-split sentences.
MspChunkResult msp_chunk_sentences(std::vector<Sentence> sentences,
                                   const std::string& separator,
                                   LogprobProvider& provider, const MspOptions& options);

}  // namespace lmchunk
