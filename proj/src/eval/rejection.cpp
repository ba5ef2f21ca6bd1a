#include "ouq/eval/rejection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ouq/error.hpp"
#include "ouq/eval/decision.hpp"

namespace ouq {

std::string_view to_string(ErrorMetric m) noexcept {
    switch (m) {
    case ErrorMetric::Mcr: return "mcr";
    case ErrorMetric::Mae: return "mae";
    case ErrorMetric::Mse: return "mse";
    }
    return "?";
}

ErrorMetric parse_error_metric(std::string_view name) {
    for (ErrorMetric m : {ErrorMetric::Mcr, ErrorMetric::Mae, ErrorMetric::Mse}) {
        if (to_string(m) == name) return m;
    }
    throw ValidationError("unknown metric '" + std::string(name) + "' (expected mcr, mae, mse)");
}

std::string_view to_string(RejectionOrdering o) noexcept {
    switch (o) {
    case RejectionOrdering::Uncertainty: return "uncertainty";
    case RejectionOrdering::Oracle: return "oracle";
    case RejectionOrdering::RandomAnalytic: return "random";
    }
    return "?";
}

std::vector<double> instance_errors(std::span<const PredictionRecord> records, ErrorMetric metric) {
    std::vector<double> errors;
    errors.reserve(records.size());
    for (const auto& r : records) {
        const int y = r.true_label;
        switch (metric) {
        case ErrorMetric::Mcr:
            errors.push_back(decide(r.mean, DecisionRule::Argmax).label != y ? 1.0 : 0.0);
            break;
        case ErrorMetric::Mae:
            errors.push_back(std::abs(decide(r.mean, DecisionRule::L1).label - y));
            break;
        case ErrorMetric::Mse: {
            const int d = decide(r.mean, DecisionRule::L2).label - y;
            errors.push_back(static_cast<double>(d * d));
            break;
        }
        }
    }
    return errors;
}

std::vector<double> instance_scores(std::span<const PredictionRecord> records, ScoreSelector score) {
    std::vector<double> scores;
    scores.reserve(records.size());
    for (const auto& r : records) scores.push_back(r.triple(score.measure).get(score.kind));
    return scores;
}

namespace {

std::vector<std::size_t> descending_order(std::span<const double> keys) {
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] > keys[b]; });
    return order;
}

double trapezoid_gap(const std::vector<double>& upper, const std::vector<double>& lower) {
    const std::size_t n = upper.size() - 1;
    double area = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        area += 0.5 * ((upper[i] - lower[i]) + (upper[i + 1] - lower[i + 1]));
    }
    return area / static_cast<double>(n);
}

} // namespace

RejectionCurve rejection_curve(ErrorMetric metric, std::span<const double> errors,
                               std::span<const double> scores, RejectionOrdering ordering,
                               RejectedAccounting accounting) {
    const std::size_t n = errors.size();
    if (n == 0) throw ValidationError("rejection curve needs at least one record");
    // oracle and random orderings may be built without scores
    if ((ordering == RejectionOrdering::Uncertainty || !scores.empty()) && scores.size() != n) {
        throw ValidationError("scores and errors differ in length");
    }
    for (double e : errors) {
        if (!std::isfinite(e) || e < 0.0) throw ValidationError("errors must be finite and non-negative");
    }
    for (double s : scores) {
        if (!std::isfinite(s)) throw ValidationError("scores must be finite");
    }

    RejectionCurve curve{{}, {}, metric, ordering};
    curve.fractions.resize(n + 1);
    curve.values.resize(n + 1);
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i <= n; ++i) curve.fractions[i] = static_cast<double>(i) / nd;

    double total = 0.0;
    for (double e : errors) total += e;

    if (ordering == RejectionOrdering::RandomAnalytic) {
        const double full = total / nd;
        for (std::size_t i = 0; i <= n; ++i) {
            curve.values[i] = accounting == RejectedAccounting::OracleAnswered
                                  ? full * (1.0 - curve.fractions[i])
                                  : full;
        }
        return curve;
    }

    const auto order = descending_order(ordering == RejectionOrdering::Oracle ? errors : scores);
    // Retained error is recomputed as a suffix sum so that values are not
    // polluted by repeated subtraction.
    std::vector<double> retained(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) retained[i] = retained[i + 1] + errors[order[i]];
    for (std::size_t i = 0; i <= n; ++i) {
        if (accounting == RejectedAccounting::OracleAnswered) {
            curve.values[i] = retained[i] / nd;
        } else {
            curve.values[i] = i < n ? retained[i] / static_cast<double>(n - i) : curve.values[n - 1];
        }
    }
    return curve;
}

RejectionCurve rejection_curve(std::span<const PredictionRecord> records, ErrorMetric metric,
                               RejectionOrdering ordering, ScoreSelector score,
                               RejectedAccounting accounting) {
    if (records.size() < 2) throw ValidationError("rejection curve needs at least two records");
    const auto errors = instance_errors(records, metric);
    std::vector<double> scores;
    if (ordering == RejectionOrdering::Uncertainty) scores = instance_scores(records, score);
    return rejection_curve(metric, errors, scores, ordering, accounting);
}

PrrResult prr(std::span<const double> errors, std::span<const double> scores) {
    const auto unc = rejection_curve(ErrorMetric::Mcr, errors, scores, RejectionOrdering::Uncertainty);
    const auto orc = rejection_curve(ErrorMetric::Mcr, errors, scores, RejectionOrdering::Oracle);
    const auto rnd = rejection_curve(ErrorMetric::Mcr, errors, scores, RejectionOrdering::RandomAnalytic);

    const double full = rnd.values.front();
    PrrResult out{trapezoid_gap(rnd.values, unc.values), trapezoid_gap(rnd.values, orc.values), 0.0};
    if (!(full > 0.0) || out.ar_orc <= 1e-12 * full) {
        throw DegenerateError("PRR undefined: oracle rejection is no better than random");
    }
    out.prr = out.ar_unc / out.ar_orc;
    return out;
}

PrrResult prr(std::span<const PredictionRecord> records, ErrorMetric metric, ScoreSelector score) {
    if (records.size() < 2) throw ValidationError("PRR needs at least two records");
    return prr(instance_errors(records, metric), instance_scores(records, score));
}

} // namespace ouq
