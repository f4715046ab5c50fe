#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>

#include "lmchunk/hash_embedder.hpp"

using namespace lmchunk;

namespace {

std::set<int> buckets_of(const std::vector<double>& v) {
    std::set<int> out;
    for (int i = 0; i < static_cast<int>(v.size()); ++i) {
        if (v[i] != 0.0) out.insert(i);
    }
    return out;
}

}  // namespace

TEST_CASE("embeddings are unit-norm and deterministic") {
    HashingEmbedder e;
    auto v1 = e.embed("hello world");
    auto v2 = e.embed("hello world");
    REQUIRE(v1.size() == HashingEmbedder::kDimensions);
    CHECK(v1 == v2);

    double norm = 0.0;
    for (double x : v1) norm += x * x;
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine_similarity(v1, v2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("different texts usually differ, disjoint bigrams are orthogonal") {
    HashingEmbedder e;

    // Hunt for two single-letter texts whose padded bigrams land in disjoint
    // buckets; with 256 buckets and 2 bigrams each this must exist.
    bool found = false;
    for (char a = 'a'; a <= 'z' && !found; ++a) {
        for (char b = 'a'; b <= 'z' && !found; ++b) {
            if (a == b) continue;
            auto va = buckets_of(e.embed(std::string(1, a)));
            auto vb = buckets_of(e.embed(std::string(1, b)));
            std::set<int> inter;
            for (int x : va) {
                if (vb.count(x)) inter.insert(x);
            }
            if (inter.empty()) {
                CHECK(cosine_similarity(e.embed(std::string(1, a)),
                                        e.embed(std::string(1, b))) == doctest::Approx(0.0));
                found = true;
            }
        }
    }
    CHECK(found);
}

TEST_CASE("bucket is stable and in range") {
    const int b = HashingEmbedder::bucket(U'a', U'b');
    CHECK(b == HashingEmbedder::bucket(U'a', U'b'));
    CHECK(b >= 0);
    CHECK(b < HashingEmbedder::kDimensions);
    CHECK(HashingEmbedder::bucket(U'a', U'b') != HashingEmbedder::bucket(U'b', U'a'));
}

TEST_CASE("empty text is rejected") {
    HashingEmbedder e;
    CHECK_THROWS_AS(e.embed(""), std::invalid_argument);
}
