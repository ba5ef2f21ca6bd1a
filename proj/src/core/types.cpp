#include "ouq/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ouq/error.hpp"

namespace ouq {

namespace {

void validate_probs(const std::vector<double>& probs) {
    if (probs.size() < 2) {
        throw ValidationError("probability vector needs at least 2 classes, got " +
                              std::to_string(probs.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = probs[i];
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
            std::ostringstream os;
            os << "probability entry " << i + 1 << " out of [0,1]: " << p;
            throw ValidationError(os.str());
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "probabilities sum to " << sum << ", expected 1";
        throw ValidationError(os.str());
    }
}

} // namespace

ClassScale::ClassScale(int k_count) : k_(k_count) {
    if (k_count < 2) {
        throw ValidationError("class scale needs K >= 2, got " + std::to_string(k_count));
    }
}

ProbabilityVector::ProbabilityVector(std::vector<double> probs) : probs_(std::move(probs)) {
    validate_probs(probs_);
}

ProbabilityVector::ProbabilityVector(std::initializer_list<double> probs)
    : ProbabilityVector(std::vector<double>(probs)) {}

ProbabilityVector ProbabilityVector::renormalized(std::vector<double> probs, double tolerance) {
    double sum = 0.0;
    for (double p : probs) {
        if (!std::isfinite(p) || p < 0.0) {
            throw ValidationError("cannot renormalize a vector with negative or non-finite entries");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > tolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "probabilities sum to " << sum << ", outside renormalization tolerance " << tolerance;
        throw ValidationError(os.str());
    }
    if (sum != 1.0) {
        for (double& p : probs) p /= sum;
    }
    return ProbabilityVector(std::move(probs));
}

ProbabilityVector ProbabilityVector::one_hot(int label, int k_count) {
    const ClassScale scale(k_count);
    if (!scale.contains(label)) {
        throw IndexError("label " + std::to_string(label) + " outside 1.." + std::to_string(k_count));
    }
    std::vector<double> probs(static_cast<std::size_t>(k_count), 0.0);
    probs[static_cast<std::size_t>(label - 1)] = 1.0;
    return ProbabilityVector(std::move(probs), Unchecked{});
}

ProbabilityVector ProbabilityVector::uniform(int k_count) {
    const ClassScale scale(k_count);
    return ProbabilityVector(std::vector<double>(static_cast<std::size_t>(k_count), 1.0 / k_count));
}

double ProbabilityVector::of_class(int label) const {
    if (label < 1 || label > k_count()) {
        throw IndexError("label " + std::to_string(label) + " outside 1.." + std::to_string(k_count()));
    }
    return probs_[static_cast<std::size_t>(label - 1)];
}

BinaryDistribution::BinaryDistribution(double p0_, double p1_) : p0(p0_), p1(p1_) {
    if (!(p0 >= 0.0 && p0 <= 1.0 && p1 >= 0.0 && p1 <= 1.0) || std::abs(p0 + p1 - 1.0) > kSumTolerance) {
        throw ValidationError("invalid Bernoulli distribution");
    }
}

EnsemblePrediction::EnsemblePrediction(std::vector<ProbabilityVector> members)
    : members_(std::move(members)) {
    if (members_.empty()) {
        throw ValidationError("ensemble needs at least one member");
    }
    const auto k = members_.front().size();
    for (const auto& m : members_) {
        if (m.size() != k) {
            throw ValidationError("ensemble members disagree on K");
        }
    }
}

std::string_view to_string(MeasureKind m) noexcept {
    switch (m) {
    case MeasureKind::Ent: return "ent";
    case MeasureKind::Var: return "var";
    case MeasureKind::BinEnt: return "bin-ent";
    case MeasureKind::BinVar: return "bin-var";
    case MeasureKind::OrdEnt: return "ord-ent";
    case MeasureKind::OrdVar: return "ord-var";
    }
    return "?";
}

MeasureKind parse_measure(std::string_view name) {
    for (MeasureKind m : kAllMeasures) {
        if (to_string(m) == name) return m;
    }
    throw ValidationError("unknown measure '" + std::string(name) +
                          "' (expected ent, var, bin-ent, bin-var, ord-ent, ord-var)");
}

std::vector<MeasureKind> parse_measure_list(std::string_view list) {
    std::vector<MeasureKind> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto end = std::min(list.find(',', start), list.size());
        const auto token = list.substr(start, end - start);
        if (token == "all") {
            out.assign(kAllMeasures.begin(), kAllMeasures.end());
        } else if (!token.empty()) {
            const auto m = parse_measure(token);
            if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
        }
        start = end + 1;
    }
    if (out.empty()) {
        throw ValidationError("empty measure selection");
    }
    return out;
}

std::string_view to_string(UncertaintyKind u) noexcept {
    switch (u) {
    case UncertaintyKind::Total: return "tu";
    case UncertaintyKind::Aleatoric: return "au";
    case UncertaintyKind::Epistemic: return "eu";
    }
    return "?";
}

UncertaintyKind parse_uncertainty_kind(std::string_view name) {
    for (UncertaintyKind u : kAllUncertaintyKinds) {
        if (to_string(u) == name) return u;
    }
    throw ValidationError("unknown uncertainty kind '" + std::string(name) + "' (expected tu, au, eu)");
}

double UncertaintyTriple::get(UncertaintyKind kind) const noexcept {
    switch (kind) {
    case UncertaintyKind::Total: return tu;
    case UncertaintyKind::Aleatoric: return au;
    case UncertaintyKind::Epistemic: return eu;
    }
    return tu;
}

} // namespace ouq
