#include "ouq/eval/record.hpp"

#include "ouq/error.hpp"

namespace ouq {

const UncertaintyTriple& PredictionRecord::triple(MeasureKind m) const {
    const auto it = uncertainty.find(m);
    if (it == uncertainty.end()) {
        throw ValidationError("record " + instance_id + " has no values for measure " +
                              std::string(to_string(m)));
    }
    return it->second;
}

PredictionRecord make_record(std::string instance_id, EnsemblePrediction members, int true_label,
                             std::span<const MeasureKind> measures, double log_base) {
    if (!members.member(0).scale().contains(true_label)) {
        throw IndexError("record " + instance_id + ": label " + std::to_string(true_label) +
                         " outside 1.." + std::to_string(members.k_count()));
    }
    ProbabilityVector mean = posterior_mean(members);
    std::map<MeasureKind, UncertaintyTriple> uncertainty;
    for (MeasureKind m : measures) uncertainty.emplace(m, compute_uncertainty(members, m, log_base));
    return PredictionRecord{std::move(instance_id), std::move(members), std::move(mean), true_label,
                            std::move(uncertainty)};
}

} // namespace ouq
