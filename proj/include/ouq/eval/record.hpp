#pragma once

#include <map>
#include <span>
#include <string>

#include "ouq/core/measures.hpp"

namespace ouq {

/// One evaluated instance: the ensemble, its mixture, the true label and the
/// uncertainty triples of every computed measure.
struct PredictionRecord {
    std::string instance_id;
    EnsemblePrediction members;
    ProbabilityVector mean;
    int true_label;
    std::map<MeasureKind, UncertaintyTriple> uncertainty;

    const UncertaintyTriple& triple(MeasureKind m) const;
};

/// Builds a record and evaluates `measures` on it. Throws IndexError when the
/// label is outside 1..K.
PredictionRecord make_record(std::string instance_id, EnsemblePrediction members, int true_label,
                             std::span<const MeasureKind> measures = kAllMeasures,
                             double log_base = kDefaultLogBase);

} // namespace ouq
