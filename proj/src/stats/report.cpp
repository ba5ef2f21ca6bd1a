#include "ouq/stats/report.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "ouq/error.hpp"

namespace ouq::stats {

namespace {

std::vector<std::size_t> rank_order(const std::vector<double>& avg_ranks) {
    std::vector<std::size_t> order(avg_ranks.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return avg_ranks[a] < avg_ranks[b]; });
    return order;
}

bool differ(const TestReport& r, std::size_t a, std::size_t b) {
    if (!r.pairwise_run) return false;
    for (const auto& c : r.pairwise) {
        if ((c.first == a && c.second == b) || (c.first == b && c.second == a)) return c.significant;
    }
    return false;
}

std::vector<std::vector<std::size_t>> non_significant_groups(const TestReport& r) {
    const auto order = rank_order(r.avg_ranks);
    std::vector<std::vector<std::size_t>> groups;
    std::size_t last_end = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::size_t j = i;
        auto fits = [&](std::size_t cand) {
            for (std::size_t t = i; t < cand; ++t) {
                if (differ(r, order[t], order[cand])) return false;
            }
            return true;
        };
        while (j + 1 < order.size() && fits(j + 1)) ++j;
        // Keep only runs not contained in the previous one.
        if (j > i && (groups.empty() || j > last_end)) {
            groups.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(i),
                                order.begin() + static_cast<std::ptrdiff_t>(j + 1));
            last_end = j;
        }
    }
    return groups;
}

} // namespace

TestReport compare_treatments(const ScoreMatrix& m, const ReportOptions& options) {
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
    TestReport report;
    report.treatments = m.treatments();
    report.blocks = m.rows();
    report.alpha = options.alpha;
    const auto friedman = friedman_test(m);
    report.friedman_stat = friedman.statistic;
    report.friedman_p = friedman.p_value;
    report.avg_ranks = friedman.avg_ranks;

    bool all_tied = true;
    for (std::size_t r = 0; r < m.rows() && all_tied; ++r) {
        const auto row = m.row(r);
        all_tied = std::all_of(row.begin(), row.end(), [&](double v) { return v == row.front(); });
    }
    report.pairwise_run = !all_tied && (!options.gate_on_friedman || friedman.p_value < options.alpha);
    if (report.pairwise_run) {
        std::vector<double> raw;
        for (std::size_t i = 0; i < m.cols(); ++i) {
            for (std::size_t j = i + 1; j < m.cols(); ++j) {
                const auto w = wilcoxon_signed_rank(m.column(i), m.column(j));
                report.pairwise.push_back({i, j, w.w_plus, w.p_value, 0.0, false});
                raw.push_back(w.p_value);
            }
        }
        const auto adjusted = holm_adjust(raw);
        for (std::size_t k = 0; k < adjusted.size(); ++k) {
            report.pairwise[k].adjusted_p = adjusted[k];
            report.pairwise[k].significant = adjusted[k] <= options.alpha;
        }
    }
    report.groups = non_significant_groups(report);
    return report;
}

std::string report_to_json(const TestReport& report) {
    nlohmann::ordered_json j;
    j["treatments"] = report.treatments;
    j["blocks"] = report.blocks;
    j["alpha"] = report.alpha;
    j["friedman"] = {{"statistic", report.friedman_stat}, {"p_value", report.friedman_p}};
    j["avg_ranks"] = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < report.treatments.size(); ++i) {
        j["avg_ranks"][report.treatments[i]] = report.avg_ranks[i];
    }
    j["pairwise_run"] = report.pairwise_run;
    j["pairwise"] = nlohmann::ordered_json::array();
    for (const auto& c : report.pairwise) {
        j["pairwise"].push_back({{"a", report.treatments[c.first]},
                                 {"b", report.treatments[c.second]},
                                 {"w_plus", c.w_plus},
                                 {"p_raw", c.raw_p},
                                 {"p_holm", c.adjusted_p},
                                 {"significant", c.significant}});
    }
    j["non_significant_groups"] = nlohmann::ordered_json::array();
    for (const auto& g : report.groups) {
        std::vector<std::string> names;
        for (auto idx : g) names.push_back(report.treatments[idx]);
        j["non_significant_groups"].push_back(names);
    }
    return j.dump(2) + "\n";
}

std::string rank_table_csv(const TestReport& report) {
    std::ostringstream os;
    os.precision(17);
    os << "treatment,avg_rank\n";
    for (auto idx : rank_order(report.avg_ranks)) {
        os << report.treatments[idx] << ',' << report.avg_ranks[idx] << '\n';
    }
    return os.str();
}

} // namespace ouq::stats
