#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace ouq {

inline constexpr std::size_t kDefaultFolds = 10;

/// Fold id (0..k-1) per instance: indices are shuffled with `seed` and dealt
/// round-robin, so the first n % k folds receive one extra instance.
std::vector<std::size_t> kfold_split(std::size_t n, std::size_t k, std::uint64_t seed);

/// As kfold_split, but each class is shuffled and dealt separately, the deal
/// continuing where the previous class stopped.
std::vector<std::size_t> stratified_kfold_split(std::span<const int> labels, std::size_t k, std::uint64_t seed);

/// Instance indices with fold id == fold (test) or != fold (train).
std::vector<std::size_t> fold_members(std::span<const std::size_t> assignment, std::size_t fold, bool test);

/// Independent stream seed for a (master seed, dataset, unit) triple.
std::uint64_t derive_seed(std::uint64_t master, std::string_view dataset_id, std::uint64_t unit);

} // namespace ouq
