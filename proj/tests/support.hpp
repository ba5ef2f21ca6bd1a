#pragma once

#include <random>
#include <vector>

#include "ouq/core/types.hpp"

namespace ouq::testing {

// flat Dirichlet sample, optionally with exact zeros sprinkled in
inline ProbabilityVector random_distribution(std::mt19937_64& rng, int k, double zero_rate = 0.0) {
    std::gamma_distribution<double> g(1.0, 1.0);
    std::bernoulli_distribution zero(zero_rate);
    std::vector<double> v(static_cast<std::size_t>(k));
    double s = 0.0;
    for (auto& x : v) {
        x = zero(rng) ? 0.0 : g(rng);
        s += x;
    }
    if (s == 0.0) {
        v[0] = 1.0;
        s = 1.0;
    }
    for (auto& x : v) x /= s;
    return ProbabilityVector::renormalized(std::move(v), 1e-9);
}

inline EnsemblePrediction random_ensemble(std::mt19937_64& rng, int k, std::size_t m, double zero_rate = 0.0) {
    std::vector<ProbabilityVector> members;
    for (std::size_t i = 0; i < m; ++i) members.push_back(random_distribution(rng, k, zero_rate));
    return EnsemblePrediction(std::move(members));
}

} // namespace ouq::testing
