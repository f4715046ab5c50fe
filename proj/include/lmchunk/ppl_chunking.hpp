#pragma once

#include <vector>

#include "lmchunk/provider.hpp"
#include "lmchunk/types.hpp"

namespace lmchunk {

// Sliding-window stand-in for KV eviction: once the accumulated prefix
// exceeds the budget, the oldest evict_fraction of its tokens are dropped.
struct WindowPolicy {
    int max_context_tokens = 4096;
    double evict_fraction = 0.5;
};

inline constexpr double kMinimaTieEps = 1e-9;

// values[i] = exp(mean NLL of sentence i's tokens given the retained prefix).
std::vector<double> sentence_ppl(const std::vector<Sentence>& sentences,
                                 LogprobProvider& provider,
                                 const WindowPolicy& window,
                                 const std::string& separator);

// Local-minimum boundary detection. Index i qualifies when both neighbours
// sit strictly above values[i] and the larger drop exceeds theta, or when
// the left drop exceeds theta and the right neighbour ties values[i].
std::vector<int> detect_minima(const std::vector<double>& values, double theta);

struct PplChunkResult {
    std::vector<Sentence> sentences;
    PplTrace trace;
    std::vector<MetaChunk> metas;
};

// Splits the document, scores each sentence, and cuts after every detected
// minimum (the minimum sentence ends its chunk).
PplChunkResult ppl_chunk(const Document& doc, double theta,
                         LogprobProvider& provider, const WindowPolicy& window);

// Groups sentences [0, n) into MetaChunks cut after each boundary index.
std::vector<MetaChunk> metas_from_boundaries(const std::vector<Sentence>& sentences,
                                             const std::vector<int>& boundaries);

}  // namespace lmchunk
