#include "ouq/pipeline/kfold.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "ouq/error.hpp"

namespace ouq {

std::vector<std::size_t> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ValidationError("k-fold needs k >= 2");
    if (n < k) {
        throw ValidationError("cannot split " + std::to_string(n) + " instances into " + std::to_string(k) + " folds");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> fold(n);
    for (std::size_t i = 0; i < n; ++i) fold[order[i]] = i % k;
    return fold;
}

std::vector<std::size_t> stratified_kfold_split(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ValidationError("k-fold needs k >= 2");
    if (labels.size() < k) {
        throw ValidationError("cannot split " + std::to_string(labels.size()) + " instances into " +
                              std::to_string(k) + " folds");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> fold(labels.size());
    std::size_t next = 0;
    for (auto& [label, members] : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        for (auto idx : members) fold[idx] = next++ % k;
    }
    return fold;
}

std::vector<std::size_t> fold_members(std::span<const std::size_t> assignment, std::size_t fold, bool test) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if ((assignment[i] == fold) == test) out.push_back(i);
    }
    return out;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view dataset_id, std::uint64_t unit) {
    // FNV-1a over the id keeps the mapping stable across standard libraries.
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : dataset_id) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                      static_cast<std::uint32_t>(unit), static_cast<std::uint32_t>(unit >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

} // namespace ouq
