#include "ouq/pipeline/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ouq/error.hpp"

namespace ouq {

Preprocessor Preprocessor::fit(const Dataset& train) {
    if (train.size() == 0) throw ValidationError("cannot fit preprocessing on an empty split");
    Preprocessor p;
    for (const auto& c : train.columns) {
        if (c.kind == ColumnKind::Numeric) {
            double mean = 0.0;
            for (double v : c.numeric) mean += v;
            mean /= static_cast<double>(c.numeric.size());
            double var = 0.0;
            for (double v : c.numeric) var += (v - mean) * (v - mean);
            var /= static_cast<double>(c.numeric.size());
            p.layout_.emplace_back(true, p.numeric_.size());
            p.numeric_.push_back({c.name, mean, std::max(std::sqrt(var), kStdFloor)});
            p.width_ += 1;
        } else {
            const std::set<std::string> levels(c.categorical.begin(), c.categorical.end());
            p.layout_.emplace_back(false, p.categorical_.size());
            p.categorical_.push_back({c.name, {levels.begin(), levels.end()}});
            p.width_ += levels.size();
        }
    }
    return p;
}

FeatureMatrix Preprocessor::transform(const Dataset& d) const {
    if (d.columns.size() != layout_.size()) {
        throw ValidationError("dataset has " + std::to_string(d.columns.size()) + " columns, preprocessing expects " +
                              std::to_string(layout_.size()));
    }
    FeatureMatrix x{d.size(), width_, std::vector<double>(d.size() * width_, 0.0)};
    std::size_t offset = 0;
    for (std::size_t c = 0; c < layout_.size(); ++c) {
        const auto& col = d.columns[c];
        const auto [is_numeric, idx] = layout_[c];
        if (is_numeric) {
            const auto& s = numeric_[idx];
            if (col.kind != ColumnKind::Numeric || col.name != s.name) {
                throw ValidationError("column '" + col.name + "' does not match fitted numeric column '" + s.name + "'");
            }
            for (std::size_t r = 0; r < x.rows; ++r) x.values[r * x.cols + offset] = (col.numeric[r] - s.mean) / s.std;
            offset += 1;
        } else {
            const auto& levels = categorical_[idx];
            if (col.kind != ColumnKind::Categorical || col.name != levels.name) {
                throw ValidationError("column '" + col.name + "' does not match fitted categorical column '" +
                                      levels.name + "'");
            }
            for (std::size_t r = 0; r < x.rows; ++r) {
                const auto it = std::lower_bound(levels.levels.begin(), levels.levels.end(), col.categorical[r]);
                if (it != levels.levels.end() && *it == col.categorical[r]) {
                    x.values[r * x.cols + offset + static_cast<std::size_t>(it - levels.levels.begin())] = 1.0;
                }
            }
            offset += levels.levels.size();
        }
    }
    return x;
}

} // namespace ouq
