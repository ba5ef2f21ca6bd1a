#pragma once

#include <span>
#include <string>
#include <vector>

#include "ouq/pipeline/dataset.hpp"

namespace ouq {

/// Dense row-major model input.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(values).subspan(r * cols, cols);
    }
};

/// Floor applied to fitted standard deviations.
inline constexpr double kStdFloor = 1e-12;

/// Standardizes numeric columns and one-hot encodes categorical columns with
/// statistics fitted on a training split only. All categories are kept;
/// categories unseen during fit encode as an all-zero block.
class Preprocessor {
public:
    struct NumericStats {
        std::string name;
        double mean;
        double std;  // population standard deviation, floored at kStdFloor
    };
    struct CategoricalLevels {
        std::string name;
        std::vector<std::string> levels;  // sorted
    };

    static Preprocessor fit(const Dataset& train);

    FeatureMatrix transform(const Dataset& d) const;

    std::size_t output_width() const noexcept { return width_; }
    const std::vector<NumericStats>& numeric() const noexcept { return numeric_; }
    const std::vector<CategoricalLevels>& categorical() const noexcept { return categorical_; }
    /// Input column order, as (is_numeric, index into numeric()/categorical()).
    const std::vector<std::pair<bool, std::size_t>>& layout() const noexcept { return layout_; }

private:
    std::vector<NumericStats> numeric_;
    std::vector<CategoricalLevels> categorical_;
    std::vector<std::pair<bool, std::size_t>> layout_;
    std::size_t width_ = 0;
};

} // namespace ouq
