#include "lmchunk/hash_embedder.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "lmchunk/utf8.hpp"

namespace lmchunk {

namespace {

constexpr char32_t kPadStart = 0x110000;
constexpr char32_t kPadEnd = 0x110001;

}  // namespace

int HashingEmbedder::bucket(char32_t a, char32_t b) {
    // FNV-1a over the two code points' bytes.
    std::uint64_t h = 1469598103934665603ULL;
    const auto mix = [&h](char32_t cp) {
        for (int shift = 0; shift < 32; shift += 8) {
            h ^= (static_cast<std::uint64_t>(cp) >> shift) & 0xFF;
            h *= 1099511628211ULL;
        }
    };
    mix(a);
    mix(b);
    return static_cast<int>(h % kDimensions);
}

std::vector<double> HashingEmbedder::embed(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("embed: text must be non-empty");
    const std::u32string cps = utf8::decode(text);

    std::u32string padded;
    padded.reserve(cps.size() + 2);
    padded.push_back(kPadStart);
    padded += cps;
    padded.push_back(kPadEnd);

    std::vector<double> vec(kDimensions, 0.0);
    for (std::size_t i = 0; i + 1 < padded.size(); ++i) {
        vec[static_cast<std::size_t>(bucket(padded[i], padded[i + 1]))] += 1.0;
    }
    double norm = 0.0;
    for (double x : vec) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : vec) x /= norm;
    return vec;
}

}  // namespace lmchunk
