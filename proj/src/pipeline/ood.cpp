#include "ouq/pipeline/ood.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ouq/error.hpp"

namespace ouq {

FeatureMatrix synthesize_ood(const Preprocessor& id_fit, const Dataset& donor, std::size_t n_rows,
                             std::uint64_t seed) {
    std::vector<const Column*> donor_numeric;
    for (const auto& c : donor.columns) {
        if (c.kind == ColumnKind::Numeric) donor_numeric.push_back(&c);
    }
    const auto required = id_fit.numeric().size();
    if (donor_numeric.size() < required) {
        throw ValidationError("OOD donor too narrow: requires " + std::to_string(required) +
                              " numeric columns, has " + std::to_string(donor_numeric.size()));
    }
    if (donor.size() == 0 && required > 0) throw ValidationError("OOD donor has no rows");

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> picks(n_rows);
    if (required > 0) {
        if (donor.size() >= n_rows) {
            std::vector<std::size_t> all(donor.size());
            std::iota(all.begin(), all.end(), std::size_t{0});
            std::shuffle(all.begin(), all.end(), rng);
            std::copy_n(all.begin(), n_rows, picks.begin());
        } else {
            std::uniform_int_distribution<std::size_t> any(0, donor.size() - 1);
            for (auto& p : picks) p = any(rng);
        }
    }

    FeatureMatrix x{n_rows, id_fit.output_width(), std::vector<double>(n_rows * id_fit.output_width(), 0.0)};
    std::size_t offset = 0;
    for (const auto& [is_numeric, idx] : id_fit.layout()) {
        if (is_numeric) {
            const auto& stats = id_fit.numeric()[idx];
            const auto& source = donor_numeric[idx]->numeric;
            for (std::size_t r = 0; r < n_rows; ++r) {
                x.values[r * x.cols + offset] = (source[picks[r]] - stats.mean) / stats.std;
            }
            offset += 1;
        } else {
            const auto width = id_fit.categorical()[idx].levels.size();
            if (width > 0) {
                std::uniform_int_distribution<std::size_t> level(0, width - 1);
                for (std::size_t r = 0; r < n_rows; ++r) x.values[r * x.cols + offset + level(rng)] = 1.0;
            }
            offset += width;
        }
    }
    return x;
}

Dataset shift_numeric(const Dataset& donor, double sigmas) {
    Dataset out = donor;
    for (auto& c : out.columns) {
        if (c.kind != ColumnKind::Numeric || c.numeric.empty()) continue;
        const double n = static_cast<double>(c.numeric.size());
        const double mean = std::accumulate(c.numeric.begin(), c.numeric.end(), 0.0) / n;
        double var = 0.0;
        for (double v : c.numeric) var += (v - mean) * (v - mean);
        const double shift = sigmas * std::sqrt(var / n);
        for (double& v : c.numeric) v += shift;
    }
    return out;
}

} // namespace ouq
