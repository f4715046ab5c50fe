#include "lmchunk/merging.hpp"

#include <stdexcept>
#include <string>

#include "lmchunk/errors.hpp"
#include "lmchunk/segmentation.hpp"

namespace lmchunk {

OverlapSpec OverlapSpec::parse(const std::string& text) {
    OverlapSpec spec;
    if (text == "none") return spec;
    if (text == "dynamic") {
        spec.mode = Mode::dynamic;
        return spec;
    }
    if (text.rfind("fixed:", 0) == 0) {
        spec.mode = Mode::fixed;
        try {
            spec.k = std::stol(text.substr(6));
        } catch (const std::exception&) {
            throw ConfigError("bad overlap spec: " + text);
        }
        if (spec.k < 1) throw ConfigError("fixed overlap needs k >= 1");
        return spec;
    }
    throw ConfigError("bad overlap spec: " + text + " (want none, fixed:K, or dynamic)");
}

std::string OverlapSpec::to_string() const {
    switch (mode) {
        case Mode::none: return "none";
        case Mode::fixed: return "fixed:" + std::to_string(k);
        case Mode::dynamic: return "dynamic";
    }
    return "none";
}

std::vector<Chunk> dynamic_merge(const std::vector<MetaChunk>& metas,
                                 const std::vector<Sentence>& sentences,
                                 long target_len, const std::string& separator) {
    if (target_len < 1) throw std::invalid_argument("target_len must be >= 1");
    std::vector<Chunk> chunks;
    if (metas.empty()) return chunks;

    auto close = [&](int start, int end, long len) {
        Chunk chunk;
        chunk.start = start;
        chunk.end = end;
        chunk.char_len = len;
        chunk.body = join_sentences(sentences, start, end, separator);
        chunk.text = chunk.body;
        chunks.push_back(std::move(chunk));
    };

    int group_start = metas.front().start;
    int group_end = metas.front().end;
    long total = metas.front().char_len;
    for (std::size_t j = 1; j < metas.size(); ++j) {
        const MetaChunk& next = metas[j];
        if (total >= target_len || total + next.char_len > target_len) {
            close(group_start, group_end, total);
            group_start = next.start;
            total = 0;
        }
        group_end = next.end;
        total += next.char_len;
    }
    close(group_start, group_end, total);
    return chunks;
}

namespace {

void attach_overlap(Chunk& chunk, const std::vector<Sentence>& sentences,
                    int first, int last_exclusive, const std::string& separator) {
    chunk.overlap_prefix.clear();
    for (int i = first; i < last_exclusive; ++i) chunk.overlap_prefix.push_back(i);
    const std::string overlap = join_sentences(sentences, first, last_exclusive, separator);
    chunk.text = overlap.empty() ? chunk.body : overlap + separator + chunk.body;
}

}  // namespace

std::vector<Chunk> apply_overlap(std::vector<Chunk> chunks,
                                 const std::vector<Sentence>& sentences,
                                 const PplTrace* trace, const OverlapSpec& spec,
                                 const std::string& separator) {
    if (spec.mode == OverlapSpec::Mode::none) return chunks;
    if (spec.mode == OverlapSpec::Mode::dynamic && trace == nullptr) {
        throw MissingTraceError("dynamic overlap needs a perplexity trace");
    }
    for (std::size_t j = 1; j < chunks.size(); ++j) {
        const Chunk& prev = chunks[j - 1];
        if (spec.mode == OverlapSpec::Mode::dynamic) {
            attach_overlap(chunks[j], sentences, prev.end - 1, prev.end, separator);
        } else {
            long got = 0;
            int first = prev.end;
            while (first > prev.start && got < spec.k) {
                --first;
                got += sentences[static_cast<std::size_t>(first)].char_len;
            }
            attach_overlap(chunks[j], sentences, first, prev.end, separator);
        }
    }
    return chunks;
}

std::string reconstruct(const std::vector<Chunk>& chunks, const std::string& separator) {
    std::string out;
    for (std::size_t j = 0; j < chunks.size(); ++j) {
        if (j > 0) out += separator;
        out += chunks[j].body;
    }
    return out;
}

}  // namespace lmchunk
