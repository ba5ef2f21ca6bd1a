#include "ouq/core/simplex.hpp"

#include <cmath>
#include <functional>

#include "ouq/error.hpp"

namespace ouq {

namespace {

int divisions_for(double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= 0.1)) {
        throw ValidationError("grid step must lie in (0, 0.1]");
    }
    const double n = 1.0 / grid_step;
    const double rounded = std::round(n);
    if (std::abs(rounded * grid_step - 1.0) > 1e-9) {
        throw ValidationError("1 / grid step must be an integer");
    }
    return static_cast<int>(rounded);
}

} // namespace

std::size_t simplex_grid_size(int k_count, double grid_step) {
    const ClassScale scale(k_count);
    const int n = divisions_for(grid_step);
    // C(n + K - 1, K - 1), built incrementally to stay exact.
    std::size_t c = 1;
    for (int i = 1; i <= k_count - 1; ++i) {
        c = c * static_cast<std::size_t>(n + i) / static_cast<std::size_t>(i);
    }
    return c;
}

std::vector<HeatmapCell> simplex_heatmap(MeasureKind m, double grid_step, double log_base, int k_count) {
    const ClassScale scale(k_count);
    const int n = divisions_for(grid_step);
    std::vector<HeatmapCell> cells;
    cells.reserve(simplex_grid_size(k_count, grid_step));

    std::vector<int> counts(static_cast<std::size_t>(k_count), 0);
    std::function<void(int, int)> fill = [&](int pos, int remaining) {
        if (pos == k_count - 1) {
            counts[static_cast<std::size_t>(pos)] = remaining;
            std::vector<double> probs(counts.size());
            for (std::size_t i = 0; i < counts.size(); ++i) {
                probs[i] = static_cast<double>(counts[i]) / n;
            }
            ProbabilityVector p(std::move(probs));
            const double tu = compute_uncertainty(EnsemblePrediction({p}), m, log_base).tu;
            cells.push_back({std::move(p), tu});
            return;
        }
        for (int c = remaining; c >= 0; --c) {
            counts[static_cast<std::size_t>(pos)] = c;
            fill(pos + 1, remaining - c);
        }
    };
    fill(0, n);
    return cells;
}

} // namespace ouq
