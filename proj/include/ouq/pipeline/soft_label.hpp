#pragma once

#include <array>

#include "ouq/core/types.hpp"

namespace ouq {

/// Smoothing factors used when the ensemble members are trained on softened
/// labels, one per member.
inline constexpr std::array<double, 10> kSoftLabelAlphas = {0.05, 0.1, 0.15, 0.2, 0.25,
                                                            0.3,  0.35, 0.4, 0.45, 0.5};

/// Unimodal soft label from the geometric distribution: mass 1 - alpha at the
/// true class y and G^-1 alpha^(|y-k|+1) (1 - alpha) at class k != y, where
/// G = sum_{k != y} alpha^|y-k| (1 - alpha). alpha = 0 gives the one-hot label.
ProbabilityVector soft_label_geometric(int y, int k_count, double alpha);

} // namespace ouq
