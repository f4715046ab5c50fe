#include "lmchunk/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "lmchunk/errors.hpp"

namespace lmchunk {

EmpiricalDistribution::EmpiricalDistribution(std::string sequence, std::string alphabet)
    : sequence_(std::move(sequence)), alphabet_(std::move(alphabet)) {
    if (sequence_.empty()) throw std::invalid_argument("sequence must be non-empty");
    if (sequence_.size() > kMaxLength) {
        throw std::invalid_argument("sequence longer than " + std::to_string(kMaxLength));
    }
    if (alphabet_.empty()) {
        std::set<char> symbols(sequence_.begin(), sequence_.end());
        alphabet_.assign(symbols.begin(), symbols.end());
    } else {
        std::set<char> symbols(alphabet_.begin(), alphabet_.end());
        if (symbols.size() != alphabet_.size()) {
            throw std::invalid_argument("alphabet symbols must be distinct");
        }
        for (char c : sequence_) {
            if (!symbols.count(c)) throw std::invalid_argument("sequence symbol not in alphabet");
        }
    }
    if (alphabet_.size() > kMaxAlphabet) {
        throw std::invalid_argument("alphabet larger than " + std::to_string(kMaxAlphabet));
    }
    const std::size_t n = sequence_.size();
    for (int order = 1; order <= kMaxOrder; ++order) {
        auto& table = counts_[order - 1];
        for (std::size_t i = 0; i < n; ++i) {
            std::string gram;
            for (int k = 0; k < order; ++k) gram += sequence_[(i + k) % n];
            ++table[gram];
        }
    }
}

const std::map<std::string, long>& EmpiricalDistribution::counts(int order) const {
    if (order < 1 || order > kMaxOrder) throw std::invalid_argument("order must be 1..4");
    return counts_[order - 1];
}

double g_k(const EmpiricalDistribution& dist, int K) {
    if (K < 1 || K > EmpiricalDistribution::kMaxOrder) {
        throw std::invalid_argument("K must be 1..4");
    }
    if (dist.sequence().size() < static_cast<std::size_t>(K) + 1) {
        throw InsufficientDataError("need at least " + std::to_string(K + 1) +
                                    " symbols for G_" + std::to_string(K));
    }
    const double n = static_cast<double>(dist.sequence().size());
    double g = 0.0;
    for (const auto& [gram, count] : dist.counts(K)) {
        const double p = static_cast<double>(count) / n;
        double conditional;
        if (K == 1) {
            conditional = p;
        } else {
            const long prefix_count = dist.counts(K - 1).at(gram.substr(0, gram.size() - 1));
            conditional = static_cast<double>(count) / static_cast<double>(prefix_count);
        }
        g -= p * std::log2(conditional);
    }
    return g;
}

bool check_monotonicity(const EmpiricalDistribution& dist) {
    constexpr double eps = 1e-9;
    const double g1 = g_k(dist, 1);
    const double g2 = g_k(dist, 2);
    const double g3 = g_k(dist, 3);
    return g1 >= g2 - eps && g2 >= g3 - eps;
}

std::pair<double, double> entropy_bound(const EmpiricalDistribution& dist) {
    const double n = static_cast<double>(dist.sequence().size());
    double h = 0.0;
    for (const auto& [gram, count] : dist.counts(1)) {
        (void)gram;
        const double p = static_cast<double>(count) / n;
        h -= p * std::log2(p);
    }
    const double bound = std::log2(static_cast<double>(dist.alphabet().size()));
    if (h > bound + 1e-9) throw std::logic_error("unigram entropy exceeded log2 |alphabet|");
    return {h, bound};
}

}  // namespace lmchunk
