#pragma once

#include <vector>

#include "ouq/core/measures.hpp"

namespace ouq {

struct HeatmapCell {
    ProbabilityVector p;
    double tu;
};

/// Number of lattice points on the closed K-simplex with 1/grid_step
/// divisions per edge: C(n + K - 1, K - 1).
std::size_t simplex_grid_size(int k_count, double grid_step);

/// Evaluates the total uncertainty of the single-member ensemble {p} for
/// every point p of the closed barycentric lattice with spacing grid_step
/// (vertices and edges included). 1 / grid_step must be an integer within
/// 1e-9 and 0 < grid_step <= 0.1. Cells are emitted in lexicographic order
/// of the lattice counts (i_1, ..., i_K), i_1 descending.
std::vector<HeatmapCell> simplex_heatmap(MeasureKind m, double grid_step,
                                         double log_base = kDefaultLogBase, int k_count = 3);

} // namespace ouq
