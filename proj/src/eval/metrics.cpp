#include "ouq/eval/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "ouq/error.hpp"
#include "ouq/eval/decision.hpp"

namespace ouq {

namespace {

void require_records(std::span<const PredictionRecord> records) {
    if (records.empty()) throw ValidationError("metrics need at least one record");
}

} // namespace

QwkResult quadratic_weighted_kappa(std::span<const int> truth, std::span<const int> predicted, int k_count) {
    const ClassScale scale(k_count);
    if (truth.size() != predicted.size() || truth.empty()) {
        throw ValidationError("qwk needs equally sized, non-empty label sequences");
    }
    const auto k = static_cast<std::size_t>(k_count);
    std::vector<double> observed(k * k, 0.0);
    std::vector<double> row(k, 0.0);
    std::vector<double> col(k, 0.0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (!scale.contains(truth[i]) || !scale.contains(predicted[i])) {
            throw IndexError("qwk label outside scale");
        }
        const auto a = static_cast<std::size_t>(truth[i] - 1);
        const auto b = static_cast<std::size_t>(predicted[i] - 1);
        observed[a * k + b] += 1.0;
        row[a] += 1.0;
        col[b] += 1.0;
    }
    const double n = static_cast<double>(truth.size());
    const double norm = static_cast<double>((k_count - 1) * (k_count - 1));
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double d = static_cast<double>(i) - static_cast<double>(j);
            const double w = d * d / norm;
            num += w * observed[i * k + j];
            den += w * row[i] * col[j] / n;
        }
    }
    if (den <= 0.0) return {0.0, true};
    return {1.0 - num / den, false};
}

PointMetrics point_metrics(std::span<const PredictionRecord> records, OneOffMode one_off) {
    require_records(records);
    const int k_count = records.front().mean.k_count();
    std::vector<int> truth;
    std::vector<int> argmax;
    truth.reserve(records.size());
    argmax.reserve(records.size());

    PointMetrics out;
    double hits_one_off = 0.0;
    for (const auto& r : records) {
        if (r.mean.k_count() != k_count) throw ValidationError("records disagree on K");
        const int y = r.true_label;
        const int modal = decide(r.mean, DecisionRule::Argmax).label;
        const int median = decide(r.mean, DecisionRule::L1).label;
        const int mean = decide(r.mean, DecisionRule::L2).label;
        truth.push_back(y);
        argmax.push_back(modal);

        out.mcr += modal != y ? 1.0 : 0.0;
        out.mae += std::abs(median - y);
        out.mse += static_cast<double>((mean - y) * (mean - y));
        if (one_off == OneOffMode::Top2) {
            const auto top = decide(r.mean, DecisionRule::Top2);
            hits_one_off += (top.label == y || top.runner_up == y) ? 1.0 : 0.0;
        } else {
            hits_one_off += std::abs(modal - y) <= 1 ? 1.0 : 0.0;
        }
    }
    const double n = static_cast<double>(records.size());
    out.mcr /= n;
    out.mae /= n;
    out.mse /= n;
    out.one_off = hits_one_off / n;
    const auto kappa = quadratic_weighted_kappa(truth, argmax, k_count);
    out.qwk = kappa.value;
    out.qwk_degenerate = kappa.degenerate;
    return out;
}

double emd_loss(const ProbabilityVector& p, int y) {
    if (!p.scale().contains(y)) throw IndexError("label outside scale");
    double loss = 0.0;
    double cdf = 0.0;
    for (int k = 1; k < p.k_count(); ++k) {
        cdf += p[static_cast<std::size_t>(k - 1)];
        const double gap = cdf - (y <= k ? 1.0 : 0.0);
        loss += gap * gap;
    }
    return loss;
}

ProbMetrics prob_metrics(std::span<const PredictionRecord> records) {
    require_records(records);
    ProbMetrics out;
    std::array<double, kEceBins> bin_count{};
    std::array<double, kEceBins> bin_hits{};
    std::array<double, kEceBins> bin_conf{};

    for (const auto& r : records) {
        const auto& p = r.mean;
        const double py = p.of_class(r.true_label);
        if (py < kNllFloor) out.nll_clamped = true;
        out.nll -= std::log(std::max(py, kNllFloor));

        for (int k = 1; k <= p.k_count(); ++k) {
            const double d = p[static_cast<std::size_t>(k - 1)] - (k == r.true_label ? 1.0 : 0.0);
            out.brier += d * d;
        }
        out.rps += emd_loss(p, r.true_label);

        const int modal = decide(p, DecisionRule::Argmax).label;
        const double conf = p.of_class(modal);
        const auto bin = std::min(static_cast<std::size_t>(conf * kEceBins), std::size_t{kEceBins - 1});
        bin_count[bin] += 1.0;
        bin_hits[bin] += modal == r.true_label ? 1.0 : 0.0;
        bin_conf[bin] += conf;
    }
    const double n = static_cast<double>(records.size());
    out.nll /= n;
    out.brier /= n;
    out.rps /= n;
    for (std::size_t b = 0; b < kEceBins; ++b) {
        if (bin_count[b] == 0.0) continue;
        out.ece += std::abs(bin_hits[b] - bin_conf[b]) / n;
    }
    return out;
}

} // namespace ouq
