#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lmchunk {

enum class Language { zh, en, auto_detect };

struct Document {
    std::string id;
    std::string text;  // normalized UTF-8
    Language language = Language::auto_detect;
};

struct Sentence {
    int index = 0;            // 0-based ordinal
    std::string text;         // trimmed, terminal punctuation attached
    long char_len = 0;        // code points, spaces included
    std::size_t byte_offset = 0;  // start offset into the normalized document text
};

// A contiguous group of sentences forming one logical unit, produced by a
// boundary-detection strategy before length-based merging.
struct MetaChunk {
    int start = 0;      // sentence range [start, end)
    int end = 0;
    long char_len = 0;  // sum of member sentence char_len
};

// A final emitted chunk. `text` is the full emitted text including the
// overlap prefix when present; `body` covers exactly [start, end) and
// `char_len` counts the body only.
struct Chunk {
    int start = 0;
    int end = 0;
    std::string body;
    std::string text;
    long char_len = 0;
    std::vector<int> overlap_prefix;  // sentence indices carried from the previous chunk
};

// Per-sentence perplexity sequence with detected minima.
struct PplTrace {
    std::vector<double> values;
    double theta = 0.0;
    std::vector<int> minima;  // strictly increasing sentence indices
};

}  // namespace lmchunk
