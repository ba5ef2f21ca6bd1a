#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ouq/eval/record.hpp"

namespace ouq {

/// Rows whose probabilities sum to within this of 1 are renormalized on
/// import; anything further off is rejected.
inline constexpr double kImportTolerance = 1e-6;

/// Member-probability interchange. CSV: header
/// `instance_id,member_id,true_label,p_1,...,p_K`, one row per
/// (instance, member). JSON: an array of objects with the same keys. K and M
/// are constant per file; instances keep their order of first appearance and
/// members are ordered by member_id.
std::vector<PredictionRecord> parse_predictions_csv(std::string_view text,
                                                    std::span<const MeasureKind> measures = kAllMeasures,
                                                    double log_base = kDefaultLogBase);
std::vector<PredictionRecord> parse_predictions_json(std::string_view text,
                                                     std::span<const MeasureKind> measures = kAllMeasures,
                                                     double log_base = kDefaultLogBase);

/// Dispatches on the extension (.json or CSV otherwise).
std::vector<PredictionRecord> import_predictions(const std::filesystem::path& path,
                                                 std::span<const MeasureKind> measures = kAllMeasures,
                                                 double log_base = kDefaultLogBase);

std::string export_predictions_csv(std::span<const PredictionRecord> records);
std::string export_predictions_json(std::span<const PredictionRecord> records);

} // namespace ouq
