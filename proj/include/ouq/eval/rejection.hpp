#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "ouq/eval/record.hpp"

namespace ouq {

/// Additive error metrics that admit per-instance contributions.
///   Mcr: 0/1 error of the argmax decision.
///   Mae: |l1 decision - y|.
///   Mse: (l2 decision - y)^2.
enum class ErrorMetric { Mcr, Mae, Mse };

std::string_view to_string(ErrorMetric m) noexcept;
ErrorMetric parse_error_metric(std::string_view name);

enum class RejectionOrdering { Uncertainty, Oracle, RandomAnalytic };

std::string_view to_string(RejectionOrdering o) noexcept;

/// OracleAnswered: rejected instances count as zero error and the metric is
/// normalized by N (the prediction-rejection convention).
/// RetainedOnly: the metric is averaged over the retained instances only; at
/// full rejection the last defined value is carried forward.
enum class RejectedAccounting { OracleAnswered, RetainedOnly };

struct ScoreSelector {
    MeasureKind measure;
    UncertaintyKind kind;
};

struct RejectionCurve {
    std::vector<double> fractions;  // 0, 1/N, ..., 1
    std::vector<double> values;
    ErrorMetric metric;
    RejectionOrdering ordering;
};

struct PrrResult {
    double ar_unc;
    double ar_orc;
    double prr;
};

std::vector<double> instance_errors(std::span<const PredictionRecord> records, ErrorMetric metric);
std::vector<double> instance_scores(std::span<const PredictionRecord> records, ScoreSelector score);

/// Curve over the per-instance grid. For the Uncertainty ordering, instances
/// are rejected by descending score (stable: lower index first on ties);
/// Oracle rejects by descending error; RandomAnalytic is the expected
/// straight line (or the flat line under RetainedOnly). `metric` only labels
/// the result.
RejectionCurve rejection_curve(ErrorMetric metric, std::span<const double> errors,
                               std::span<const double> scores, RejectionOrdering ordering,
                               RejectedAccounting accounting = RejectedAccounting::OracleAnswered);

RejectionCurve rejection_curve(std::span<const PredictionRecord> records, ErrorMetric metric,
                               RejectionOrdering ordering, ScoreSelector score,
                               RejectedAccounting accounting = RejectedAccounting::OracleAnswered);

/// Prediction-rejection ratio: the trapezoidal area between the random line
/// and the uncertainty curve over the same area for the oracle curve.
/// Throws DegenerateError when the oracle area vanishes (no errors, or all
/// errors equal so that every ordering is optimal).
PrrResult prr(std::span<const double> errors, std::span<const double> scores);

PrrResult prr(std::span<const PredictionRecord> records, ErrorMetric metric, ScoreSelector score);

} // namespace ouq
