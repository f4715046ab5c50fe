#pragma once

#include <string>
#include <vector>

#include "lmchunk/types.hpp"

namespace lmchunk {

struct OverlapSpec {
    enum class Mode { none, fixed, dynamic };
    Mode mode = Mode::none;
    long k = 0;  // char budget for fixed mode

    static OverlapSpec parse(const std::string& text);  // "none" | "fixed:K" | "dynamic"
    std::string to_string() const;
};

// Greedy left-to-right grouping of adjacent metas. A group closes when the
// next meta would push the total past L; a total exactly equal to L closes
// inclusively. A single meta longer than L is emitted whole.
std::vector<Chunk> dynamic_merge(const std::vector<MetaChunk>& metas,
                                 const std::vector<Sentence>& sentences,
                                 long target_len, const std::string& separator);

// dynamic: every chunk after the first inherits the previous chunk's final
// sentence (the boundary minimum). fixed: the smallest sentence suffix of the
// previous chunk covering at least k characters. Overlap goes into
// overlap_prefix and is prepended to text; body and char_len are untouched.
std::vector<Chunk> apply_overlap(std::vector<Chunk> chunks,
                                 const std::vector<Sentence>& sentences,
                                 const PplTrace* trace, const OverlapSpec& spec,
                                 const std::string& separator);

// Joins chunk bodies back into the sentence-joined document text.
std::string reconstruct(const std::vector<Chunk>& chunks, const std::string& separator);

}  // namespace lmchunk
