#include "ouq/eval/decision.hpp"

#include <algorithm>
#include <cmath>

namespace ouq {

namespace {

int argmax_label(const ProbabilityVector& p, int exclude = 0) {
    int best = 0;
    double best_p = -1.0;
    for (int k = 1; k <= p.k_count(); ++k) {
        if (k == exclude) continue;
        const double pk = p[static_cast<std::size_t>(k - 1)];
        if (pk > best_p) {
            best_p = pk;
            best = k;
        }
    }
    return best;
}

// Cumulative sums are compared against 1/2 with a small slack so that
// e.g. 0.1 + 0.2 + 0.2 still counts as reaching the median.
constexpr double kMedianSlack = 1e-12;

int lowest_median(const ProbabilityVector& p) {
    double cdf = 0.0;
    for (int k = 1; k <= p.k_count(); ++k) {
        cdf += p[static_cast<std::size_t>(k - 1)];
        if (cdf >= 0.5 - kMedianSlack) return k;
    }
    return p.k_count();
}

int rounded_mean(const ProbabilityVector& p) {
    double mu = 0.0;
    for (int k = 1; k <= p.k_count(); ++k) mu += p[static_cast<std::size_t>(k - 1)] * k;
    const int r = static_cast<int>(std::floor(mu + 0.5));
    return std::clamp(r, 1, p.k_count());
}

} // namespace

Decision decide(const ProbabilityVector& p, DecisionRule rule) {
    switch (rule) {
    case DecisionRule::Argmax: return {argmax_label(p), std::nullopt};
    case DecisionRule::L1: return {lowest_median(p), std::nullopt};
    case DecisionRule::L2: return {rounded_mean(p), std::nullopt};
    case DecisionRule::Top2: {
        const int first = argmax_label(p);
        return {first, argmax_label(p, first)};
    }
    }
    return {argmax_label(p), std::nullopt};
}

} // namespace ouq
