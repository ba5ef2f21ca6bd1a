#include "ouq/pipeline/soft_label.hpp"

#include <cmath>
#include <cstdlib>

#include "ouq/error.hpp"

namespace ouq {

ProbabilityVector soft_label_geometric(int y, int k_count, double alpha) {
    const ClassScale scale(k_count);
    if (!scale.contains(y)) throw IndexError("label outside 1..K");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ValidationError("smoothing factor must lie in [0, 1)");
    if (alpha == 0.0) return ProbabilityVector::one_hot(y, k_count);

    double g = 0.0;
    for (int k = 1; k <= k_count; ++k) {
        if (k != y) g += std::pow(alpha, std::abs(y - k)) * (1.0 - alpha);
    }
    std::vector<double> probs(static_cast<std::size_t>(k_count));
    for (int k = 1; k <= k_count; ++k) {
        probs[static_cast<std::size_t>(k - 1)] =
            k == y ? 1.0 - alpha : std::pow(alpha, std::abs(y - k) + 1) * (1.0 - alpha) / g;
    }
    return ProbabilityVector(std::move(probs));
}

} // namespace ouq
