#pragma once

#include <map>
#include <string>
#include <utility>

namespace lmchunk {

// Exact n-gram count tables over a short symbol sequence. Counts are cyclic
// (the sequence wraps), which makes every order-K table a consistent marginal
// of the order-(K+1) table; the conditional-entropy chain G_1 >= G_2 >= ...
// then holds exactly, not just asymptotically.
class EmpiricalDistribution {
public:
    static constexpr int kMaxOrder = 4;
    static constexpr std::size_t kMaxAlphabet = 6;
    static constexpr std::size_t kMaxLength = 16;

    // Empty alphabet means "use the distinct symbols of the sequence".
    explicit EmpiricalDistribution(std::string sequence, std::string alphabet = "");

    const std::string& sequence() const { return sequence_; }
    const std::string& alphabet() const { return alphabet_; }
    const std::map<std::string, long>& counts(int order) const;

private:
    std::string sequence_;
    std::string alphabet_;
    std::map<std::string, long> counts_[kMaxOrder];
};

// G_K = -sum over K-grams of P(T_K) log2 P(t_K | T_{K-1}), exact enumeration.
double g_k(const EmpiricalDistribution& dist, int K);

// True iff G_1 >= G_2 >= G_3 within 1e-9.
bool check_monotonicity(const EmpiricalDistribution& dist);

// (unigram entropy, log2 |alphabet|); the first never exceeds the second.
std::pair<double, double> entropy_bound(const EmpiricalDistribution& dist);

}  // namespace lmchunk
