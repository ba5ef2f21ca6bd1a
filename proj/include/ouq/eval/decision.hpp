#pragma once

#include <optional>

#include "ouq/core/types.hpp"

namespace ouq {

/// Expected-loss-minimizing decision rules.
///   Argmax: 0/1 loss, modal class (lowest index on ties).
///   L1:     absolute loss, lowest median.
///   L2:     squared loss, mean label rounded half-up, clipped to 1..K.
///   Top2:   the two most probable classes (for 1-OFF scoring).
enum class DecisionRule { Argmax, L1, L2, Top2 };

struct Decision {
    int label;
    std::optional<int> runner_up;  // set for Top2 only
};

Decision decide(const ProbabilityVector& p, DecisionRule rule);

} // namespace ouq
