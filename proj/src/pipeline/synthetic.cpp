#include "ouq/pipeline/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ouq/error.hpp"

namespace ouq {

Dataset make_synthetic_ordinal(const SyntheticConfig& config, std::uint64_t seed, std::string id) {
    if (config.k < 2) throw ValidationError("synthetic data needs k >= 2");
    if (config.n < static_cast<std::size_t>(config.k)) throw ValidationError("synthetic data needs n >= k");
    if (config.numeric < 1) throw ValidationError("synthetic data needs at least one numeric column");
    if (!(config.noise >= 0.0)) throw ValidationError("noise must be non-negative");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_int_distribution<int> group(0, 2);

    Dataset d;
    d.id = std::move(id);
    d.k_count = config.k;
    for (std::size_t j = 0; j < config.numeric; ++j) {
        d.columns.push_back({"x" + std::to_string(j + 1), ColumnKind::Numeric, {}, {}});
    }
    if (config.categorical) d.columns.push_back({"group", ColumnKind::Categorical, {}, {}});

    static constexpr const char* kGroups[] = {"a", "b", "c"};
    std::vector<double> latent(config.n);
    for (std::size_t i = 0; i < config.n; ++i) {
        double z = 0.0;
        double x0 = 0.0;
        for (std::size_t j = 0; j < config.numeric; ++j) {
            const double v = gauss(rng);
            if (j == 0) x0 = v;
            d.columns[j].numeric.push_back(v);
            z += v / static_cast<double>(j + 1);
        }
        if (config.categorical) {
            const int g = group(rng);
            d.columns.back().categorical.emplace_back(kGroups[g]);
            z += 0.5 * static_cast<double>(g - 1);
        }
        z += config.noise * (0.3 + std::abs(x0)) * gauss(rng);
        latent[i] = z;
    }

    std::vector<std::size_t> order(config.n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return latent[a] < latent[b]; });
    d.labels.assign(config.n, 1);
    for (std::size_t rank = 0; rank < config.n; ++rank) {
        d.labels[order[rank]] = 1 + static_cast<int>(rank * static_cast<std::size_t>(config.k) / config.n);
    }
    d.validate();
    return d;
}

} // namespace ouq
