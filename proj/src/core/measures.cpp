#include "ouq/core/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "ouq/error.hpp"

namespace ouq {

namespace {

void check_log_base(double log_base) {
    if (!(std::isfinite(log_base) && log_base > 1.0)) {
        throw ValidationError("log base must be > 1");
    }
}

// Natural-log entropy of a row; callers divide by log(base).
double entropy_nats(std::span<const double> p) {
    double h = 0.0;
    for (double pk : p) {
        if (pk > 0.0) h -= pk * std::log(pk);
    }
    return h;
}

double binary_entropy_nats(double p0, double p1) {
    double h = 0.0;
    if (p0 > 0.0) h -= p0 * std::log(p0);
    if (p1 > 0.0) h -= p1 * std::log(p1);
    return h;
}

double label_mean(std::span<const double> p) {
    double mu = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) mu += p[k] * static_cast<double>(k + 1);
    return mu;
}

double label_variance(std::span<const double> p, double mu) {
    double v = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double d = static_cast<double>(k + 1) - mu;
        v += p[k] * d * d;
    }
    return v;
}

double clamp_information(double eu) {
    if (eu < 0.0) {
        if (eu < -kClampTolerance) {
            std::ostringstream os;
            os << "negative mutual information " << eu << " exceeds clamp tolerance";
            throw NumericalError(os.str());
        }
        return 0.0;
    }
    return eu;
}

void accumulate(UncertaintyTriple& acc, const UncertaintyTriple& t) {
    acc.tu += t.tu;
    acc.au += t.au;
    acc.eu += t.eu;
}

} // namespace

double shannon_entropy(const ProbabilityVector& p, double log_base) {
    check_log_base(log_base);
    return entropy_nats(p.values()) / std::log(log_base);
}

double ordinal_variance(const ProbabilityVector& p) {
    return label_variance(p.values(), label_mean(p.values()));
}

ProbabilityVector posterior_mean(const EnsemblePrediction& e) {
    const auto k = static_cast<std::size_t>(e.k_count());
    std::vector<double> mean(k, 0.0);
    for (const auto& member : e.members()) {
        for (std::size_t i = 0; i < k; ++i) mean[i] += member[i];
    }
    const double m = static_cast<double>(e.member_count());
    for (double& v : mean) v /= m;
    return ProbabilityVector(std::move(mean));
}

UncertaintyTriple decompose_entropy(const EnsemblePrediction& e, double log_base) {
    check_log_base(log_base);
    const double scale = std::log(log_base);
    const double tu = entropy_nats(posterior_mean(e).values()) / scale;
    double au = 0.0;
    for (const auto& member : e.members()) au += entropy_nats(member.values());
    au /= static_cast<double>(e.member_count()) * scale;
    return {tu, au, clamp_information(tu - au), MeasureKind::Ent};
}

UncertaintyTriple decompose_variance(const EnsemblePrediction& e) {
    const double m = static_cast<double>(e.member_count());
    std::vector<double> member_means;
    member_means.reserve(e.member_count());
    double au = 0.0;
    for (const auto& member : e.members()) {
        const double mu_m = label_mean(member.values());
        member_means.push_back(mu_m);
        au += label_variance(member.values(), mu_m);
    }
    au /= m;

    double mu = 0.0;
    for (double mu_m : member_means) mu += mu_m;
    mu /= m;
    double eu = 0.0;
    for (double mu_m : member_means) eu += (mu - mu_m) * (mu - mu_m);
    eu /= m;

    const double tu = ordinal_variance(posterior_mean(e));
    return {tu, au, eu, MeasureKind::Var};
}

BinaryDistribution one_vs_rest_reduce(const ProbabilityVector& p, int k) {
    if (k < 1 || k > p.k_count()) {
        throw IndexError("one-vs-rest class " + std::to_string(k) + " outside 1.." +
                         std::to_string(p.k_count()));
    }
    double rest = 0.0;
    for (int i = 1; i <= p.k_count(); ++i) {
        if (i != k) rest += p[static_cast<std::size_t>(i - 1)];
    }
    // partial sums of a valid vector may overshoot 1 by rounding
    return {std::min(rest, 1.0), p[static_cast<std::size_t>(k - 1)]};
}

BinaryDistribution ocs_reduce(const ProbabilityVector& p, int k) {
    if (k < 1 || k > p.k_count() - 1) {
        throw IndexError("split index " + std::to_string(k) + " outside 1.." +
                         std::to_string(p.k_count() - 1));
    }
    double lower = 0.0;
    double upper = 0.0;
    for (int i = 1; i <= p.k_count(); ++i) {
        (i <= k ? lower : upper) += p[static_cast<std::size_t>(i - 1)];
    }
    return {std::min(lower, 1.0), std::min(upper, 1.0)};
}

UncertaintyTriple decompose_binary(std::span<const BinaryDistribution> members, BaseMeasure base,
                                   double log_base) {
    if (members.empty()) {
        throw ValidationError("binary ensemble needs at least one member");
    }
    const double m = static_cast<double>(members.size());
    double mean0 = 0.0;
    double mean1 = 0.0;
    for (const auto& b : members) {
        mean0 += b.p0;
        mean1 += b.p1;
    }
    mean0 /= m;
    mean1 /= m;

    UncertaintyTriple t;
    if (base == BaseMeasure::Entropy) {
        check_log_base(log_base);
        const double scale = std::log(log_base);
        t.tu = binary_entropy_nats(mean0, mean1) / scale;
        for (const auto& b : members) t.au += binary_entropy_nats(b.p0, b.p1);
        t.au /= m * scale;
        t.eu = clamp_information(t.tu - t.au);
    } else {
        // Bernoulli variance p0 * p1; the member means are the p1 values.
        t.tu = mean0 * mean1;
        for (const auto& b : members) {
            t.au += b.p0 * b.p1;
            t.eu += (b.p1 - mean1) * (b.p1 - mean1);
        }
        t.au /= m;
        t.eu /= m;
    }
    return t;
}

UncertaintyTriple aggregate_labelwise(const EnsemblePrediction& e, BaseMeasure base, double log_base) {
    UncertaintyTriple total;
    std::vector<BinaryDistribution> reduced;
    reduced.reserve(e.member_count());
    for (int k = 1; k <= e.k_count(); ++k) {
        reduced.clear();
        for (const auto& member : e.members()) reduced.push_back(one_vs_rest_reduce(member, k));
        accumulate(total, decompose_binary(reduced, base, log_base));
    }
    total.measure = base == BaseMeasure::Entropy ? MeasureKind::BinEnt : MeasureKind::BinVar;
    return total;
}

UncertaintyTriple aggregate_ordinal(const EnsemblePrediction& e, BaseMeasure base, double log_base) {
    UncertaintyTriple total;
    std::vector<BinaryDistribution> reduced;
    reduced.reserve(e.member_count());
    for (int k = 1; k <= e.k_count() - 1; ++k) {
        reduced.clear();
        for (const auto& member : e.members()) reduced.push_back(ocs_reduce(member, k));
        accumulate(total, decompose_binary(reduced, base, log_base));
    }
    total.measure = base == BaseMeasure::Entropy ? MeasureKind::OrdEnt : MeasureKind::OrdVar;
    return total;
}

UncertaintyTriple compute_uncertainty(const EnsemblePrediction& e, MeasureKind m, double log_base) {
    switch (m) {
    case MeasureKind::Ent: return decompose_entropy(e, log_base);
    case MeasureKind::Var: return decompose_variance(e);
    case MeasureKind::BinEnt: return aggregate_labelwise(e, BaseMeasure::Entropy, log_base);
    case MeasureKind::BinVar: return aggregate_labelwise(e, BaseMeasure::Variance, log_base);
    case MeasureKind::OrdEnt: return aggregate_ordinal(e, BaseMeasure::Entropy, log_base);
    case MeasureKind::OrdVar: return aggregate_ordinal(e, BaseMeasure::Variance, log_base);
    }
    throw ValidationError("unknown measure");
}

} // namespace ouq
