#include "ouq/stats/tests.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "ouq/error.hpp"

namespace ouq::stats {

ScoreMatrix::ScoreMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                         std::vector<std::string> treatments)
    : rows_(rows), cols_(cols), values_(std::move(values)), treatments_(std::move(treatments)) {
    if (rows_ < 2 || cols_ < 2) throw ValidationError("score matrix needs at least 2 rows and 2 treatments");
    if (values_.size() != rows_ * cols_) throw ValidationError("score matrix is not rectangular");
    for (double v : values_) {
        if (!std::isfinite(v)) throw ValidationError("score matrix contains non-finite values");
    }
    if (treatments_.empty()) {
        for (std::size_t c = 0; c < cols_; ++c) treatments_.push_back("t" + std::to_string(c + 1));
    } else if (treatments_.size() != cols_) {
        throw ValidationError("treatment names do not match column count");
    }
}

std::vector<double> ScoreMatrix::column(std::size_t c) const {
    std::vector<double> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = at(r, c);
    return out;
}

namespace {

struct Ranking {
    std::vector<double> ranks;
    double tie_term = 0.0;  // sum over tie groups of t^3 - t
};

// Average ranks (1-based) of `keys` sorted ascending by `less`.
template <typename Less>
Ranking rank_with(std::span<const double> keys, Less less) {
    std::vector<std::size_t> order(keys.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return less(keys[a], keys[b]); });
    Ranking out{std::vector<double>(keys.size()), 0.0};
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && keys[order[j + 1]] == keys[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) out.ranks[order[t]] = avg;
        const double t = static_cast<double>(j - i + 1);
        out.tie_term += t * t * t - t;
        i = j + 1;
    }
    return out;
}

double chi_square_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

} // namespace

std::vector<double> descending_ranks(std::span<const double> values) {
    return rank_with(values, [](double a, double b) { return a > b; }).ranks;
}

FriedmanResult friedman_test(const ScoreMatrix& m) {
    const double n = static_cast<double>(m.rows());
    const double t = static_cast<double>(m.cols());
    std::vector<double> rank_sums(m.cols(), 0.0);
    double tie_term = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto ranking = rank_with(m.row(r), [](double a, double b) { return a > b; });
        for (std::size_t c = 0; c < m.cols(); ++c) rank_sums[c] += ranking.ranks[c];
        tie_term += ranking.tie_term;
    }
    FriedmanResult out{0.0, 1.0, {}};
    for (double s : rank_sums) out.avg_ranks.push_back(s / n);

    const double correction = 1.0 - tie_term / (n * t * (t * t - 1.0));
    if (correction <= 1e-12) return out;

    double sum_sq = 0.0;
    for (double s : rank_sums) sum_sq += s * s;
    const double raw = 12.0 / (n * t * (t + 1.0)) * sum_sq - 3.0 * n * (t + 1.0);
    out.statistic = std::max(raw / correction, 0.0);
    out.p_value = chi_square_sf(out.statistic, t - 1.0);
    return out;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    WilcoxonMethod method) {
    if (a.size() != b.size()) throw ValidationError("wilcoxon needs paired samples of equal length");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (!std::isfinite(d)) throw ValidationError("wilcoxon inputs must be finite");
        if (d != 0.0) diffs.push_back(d);
    }
    const std::size_t n = diffs.size();
    WilcoxonResult out{0.0, 1.0, n, false};
    if (n == 0) return out;

    std::vector<double> magnitudes(n);
    std::transform(diffs.begin(), diffs.end(), magnitudes.begin(), [](double d) { return std::abs(d); });
    const auto ranking = rank_with(magnitudes, [](double x, double y) { return x < y; });
    for (std::size_t i = 0; i < n; ++i) {
        if (diffs[i] > 0.0) out.w_plus += ranking.ranks[i];
    }

    const bool exact = method == WilcoxonMethod::Exact ||
                       (method == WilcoxonMethod::Auto && n <= kExactWilcoxonMax);
    out.exact = exact;
    if (exact) {
        if (n > 40) throw ValidationError("exact wilcoxon limited to 40 differences");
        // Average ranks are multiples of 1/2, so doubled ranks are integers and
        // the null distribution of the doubled W+ is a subset-sum count.
        std::vector<std::size_t> doubled(n);
        std::size_t total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            doubled[i] = static_cast<std::size_t>(std::lround(2.0 * ranking.ranks[i]));
            total += doubled[i];
        }
        std::vector<double> counts(total + 1, 0.0);
        counts[0] = 1.0;
        std::size_t reach = 0;
        for (std::size_t r : doubled) {
            for (std::size_t s = reach + 1; s-- > 0;) {
                if (counts[s] != 0.0) counts[s + r] += counts[s];
            }
            reach += r;
        }
        const auto observed = static_cast<std::size_t>(std::lround(2.0 * out.w_plus));
        double lower = 0.0;
        double upper = 0.0;
        for (std::size_t s = 0; s <= total; ++s) {
            if (s <= observed) lower += counts[s];
            if (s >= observed) upper += counts[s];
        }
        const double all = std::ldexp(1.0, static_cast<int>(n));
        out.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / all);
        return out;
    }

    const double nd = static_cast<double>(n);
    const double mean = nd * (nd + 1.0) / 4.0;
    const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - ranking.tie_term / 48.0;
    if (var <= 0.0) return out;
    const double z = std::max(std::abs(out.w_plus - mean) - 0.5, 0.0) / std::sqrt(var);
    out.p_value = std::min(1.0, 2.0 * normal_sf(z));
    return out;
}

std::vector<double> holm_adjust(std::span<const double> pvals) {
    const std::size_t m = pvals.size();
    for (double p : pvals) {
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p-values must lie in [0, 1]");
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pvals[a] < pvals[b]; });
    std::vector<double> adjusted(m);
    double running = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double scaled = std::min(1.0, static_cast<double>(m - i) * pvals[order[i]]);
        running = std::max(running, scaled);
        adjusted[order[i]] = running;
    }
    return adjusted;
}

} // namespace ouq::stats
