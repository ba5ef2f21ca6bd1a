#pragma once

#include <cstdint>

#include "ouq/pipeline/dataset.hpp"

namespace ouq {

/// Ordinal benchmark generator: a latent score z = w . x + c(cat) + e is cut
/// at its empirical quantiles into k balanced classes. The noise e is
/// heteroscedastic (its scale grows with |x_0|), so the Bayes error varies
/// across the input space.
struct SyntheticConfig {
    std::size_t n = 500;
    int k = 5;
    std::size_t numeric = 6;
    bool categorical = true;  // adds a three-level column "group"
    double noise = 0.6;
};

Dataset make_synthetic_ordinal(const SyntheticConfig& config, std::uint64_t seed, std::string id = "synthetic");

} // namespace ouq
