#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ouq::stats {

/// Rows are blocks (datasets / cells), columns are treatments (measures).
/// Higher values are better.
class ScoreMatrix {
public:
    ScoreMatrix(std::size_t rows, std::size_t cols, std::vector<double> values,
                std::vector<std::string> treatments = {});

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double at(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const noexcept {
        return std::span<const double>(values_).subspan(r * cols_, cols_);
    }
    std::vector<double> column(std::size_t c) const;
    const std::vector<std::string>& treatments() const noexcept { return treatments_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> values_;
    std::vector<std::string> treatments_;
};

/// Ranks with rank 1 for the largest value; tied values share the average rank.
std::vector<double> descending_ranks(std::span<const double> values);

struct FriedmanResult {
    double statistic;
    double p_value;
    std::vector<double> avg_ranks;
};

/// Tie-corrected Friedman chi-square with T - 1 degrees of freedom. Every row
/// constant gives statistic 0 and p = 1.
FriedmanResult friedman_test(const ScoreMatrix& m);

enum class WilcoxonMethod { Auto, Exact, Normal };

/// Largest number of non-zero differences handled exactly under Auto.
inline constexpr std::size_t kExactWilcoxonMax = 12;

struct WilcoxonResult {
    double w_plus;       // rank sum of positive differences a - b
    double p_value;      // two-sided
    std::size_t n_used;  // non-zero differences
    bool exact;
};

/// Two-sided Wilcoxon signed-rank test. Zero differences are dropped and tied
/// |differences| get average ranks. The exact null distribution (enumerated
/// over sign assignments of the actual ranks) is used for n <= 12 under Auto;
/// above that a normal approximation with continuity and tie correction.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    WilcoxonMethod method = WilcoxonMethod::Auto);

/// Holm step-down adjustment; output in input order.
std::vector<double> holm_adjust(std::span<const double> pvals);

} // namespace ouq::stats
