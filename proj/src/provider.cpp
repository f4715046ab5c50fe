#include "lmchunk/provider.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lmchunk {

double LogprobResponse::sum_logprob() const {
    double sum = 0.0;
    for (const auto& t : token_logprobs) sum += t.logprob;
    return sum;
}

double LogprobResponse::perplexity() const {
    if (token_logprobs.empty()) throw std::logic_error("perplexity of empty response");
    return std::exp(-sum_logprob() / static_cast<double>(token_logprobs.size()));
}

double renormalized_margin(double logprob_first, double logprob_second) {
    const double m = std::max(logprob_first, logprob_second);
    const double a = std::exp(logprob_first - m);
    const double b = std::exp(logprob_second - m);
    return (a - b) / (a + b);
}

double LogprobProvider::choice_margin(const ChoiceProbRequest& req) {
    const int budget = 1 << 20;
    const double lp1 = logprobs({req.prompt, req.choices.first, budget}).sum_logprob();
    const double lp2 = logprobs({req.prompt, req.choices.second, budget}).sum_logprob();
    return renormalized_margin(lp1, lp2);
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("cosine: dimension mismatch");
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace lmchunk
