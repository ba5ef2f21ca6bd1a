#include "ouq/eval/roc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ouq/error.hpp"

namespace ouq {

double auc_roc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw ValidationError("scores and labels differ in length");
    double positives = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) throw ValidationError("labels must be 0 or 1");
        if (!std::isfinite(scores[i])) throw ValidationError("scores must be finite");
        positives += labels[i];
    }
    const double negatives = static_cast<double>(labels.size()) - positives;
    if (positives == 0.0 || negatives == 0.0) {
        throw ValidationError("AUC needs both positive and negative labels");
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of (1-based, tie-averaged) ranks of the positives.
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) {
            if (labels[order[t]] == 1) rank_sum += avg_rank;
        }
        i = j + 1;
    }
    const double u = rank_sum - positives * (positives + 1.0) / 2.0;
    return u / (positives * negatives);
}

} // namespace ouq
