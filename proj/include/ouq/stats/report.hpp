#pragma once

#include <string>
#include <vector>

#include "ouq/stats/tests.hpp"

namespace ouq::stats {

inline constexpr double kDefaultAlpha = 0.05;

struct PairwiseComparison {
    std::size_t first;
    std::size_t second;
    double w_plus;
    double raw_p;
    double adjusted_p;
    bool significant;
};

struct TestReport {
    std::vector<std::string> treatments;
    std::size_t blocks = 0;
    double friedman_stat = 0.0;
    double friedman_p = 1.0;
    std::vector<double> avg_ranks;
    double alpha = kDefaultAlpha;
    bool pairwise_run = false;
    std::vector<PairwiseComparison> pairwise;
    /// Maximal runs of rank-adjacent treatments with no significant pairwise
    /// difference (the bars of a critical-difference diagram), by treatment
    /// index, ordered by average rank.
    std::vector<std::vector<std::size_t>> groups;
};

struct ReportOptions {
    double alpha = kDefaultAlpha;
    /// Run the pairwise Wilcoxon tests only when the Friedman test rejects.
    bool gate_on_friedman = true;
};

/// Friedman test, then Holm-adjusted pairwise Wilcoxon signed-rank tests
/// over all T(T-1)/2 treatment pairs.
TestReport compare_treatments(const ScoreMatrix& m, const ReportOptions& options = {});

std::string report_to_json(const TestReport& report);

/// CSV `treatment,avg_rank` sorted by rank.
std::string rank_table_csv(const TestReport& report);

} // namespace ouq::stats
