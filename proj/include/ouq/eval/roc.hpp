#pragma once

#include <span>

namespace ouq {

/// Area under the ROC curve for scores against binary labels (1 positive,
/// 0 negative), via the Mann-Whitney U statistic with average ranks for
/// tied scores. Throws ValidationError unless both classes are present.
double auc_roc(std::span<const double> scores, std::span<const int> labels);

} // namespace ouq
