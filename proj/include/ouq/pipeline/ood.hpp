#pragma once

#include <cstdint>

#include "ouq/pipeline/dataset.hpp"
#include "ouq/pipeline/preprocess.hpp"

namespace ouq {

/// Builds `n_rows` out-of-distribution inputs in the model's input space.
/// Donor rows are drawn without replacement (with replacement when the donor
/// is smaller than n_rows); the i-th ID numeric column takes the donor's i-th
/// numeric column, standardized with the ID training mean and std held by
/// `id_fit`. Categorical blocks get a category drawn uniformly from the ID
/// training levels. Throws ValidationError when the donor has fewer numeric
/// columns than the ID data.
FeatureMatrix synthesize_ood(const Preprocessor& id_fit, const Dataset& donor, std::size_t n_rows,
                             std::uint64_t seed);

/// Copy of `donor` with every numeric column shifted by `sigmas` times that
/// column's own population standard deviation.
Dataset shift_numeric(const Dataset& donor, double sigmas);

} // namespace ouq
