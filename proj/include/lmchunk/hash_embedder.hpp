#pragma once

#include "lmchunk/provider.hpp"

namespace lmchunk {

// Offline embedding fallback: character bigrams hashed into a fixed number
// of buckets, L2-normalized. Deterministic and stateless.
class HashingEmbedder final : public EmbedProvider {
public:
    static constexpr int kDimensions = 256;

    std::vector<double> embed(const std::string& text) override;

    // Bucket for one (a, b) code-point bigram; exposed for tests.
    static int bucket(char32_t a, char32_t b);
};

}  // namespace lmchunk
