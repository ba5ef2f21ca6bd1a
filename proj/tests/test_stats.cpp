#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "ouq/error.hpp"
#include "ouq/stats/report.hpp"
#include "ouq/stats/tests.hpp"

using namespace ouq;
using namespace ouq::stats;

namespace {

// two-sided p by enumerating every sign assignment of the average ranks of |d|
double wilcoxon_by_enumeration(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) d.push_back(a[i] - b[i]);
    }
    const std::size_t n = d.size();
    std::vector<double> absd(n);
    for (std::size_t i = 0; i < n; ++i) absd[i] = std::abs(d[i]);
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n; ++i) {
        double below = 0, equal = 0;
        for (std::size_t j = 0; j < n; ++j) {
            below += absd[j] < absd[i];
            equal += absd[j] == absd[i];
        }
        rank[i] = below + (equal + 1) / 2.0;
    }
    double w = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] > 0) w += rank[i];
        total += rank[i];
    }
    const double mu = total / 2.0;
    std::size_t extreme = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if ((mask >> i) & 1u) s += rank[i];
        }
        if (std::abs(s - mu) >= std::abs(w - mu) - 1e-9) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(std::uint64_t{1} << n);
}

double friedman_by_formula(const std::vector<std::vector<double>>& rows) {
    const double n = static_cast<double>(rows.size());
    const double t = static_cast<double>(rows.front().size());
    std::vector<double> rsum(rows.front().size(), 0.0);
    double tie_sum = 0.0;
    for (const auto& r : rows) {
        auto ranks = descending_ranks(r);
        for (std::size_t j = 0; j < r.size(); ++j) rsum[j] += ranks[j];
        for (std::size_t j = 0; j < r.size(); ++j) {
            double c = 0;
            for (std::size_t i = 0; i < r.size(); ++i) c += r[i] == r[j];
            tie_sum += (c * c - 1.0);  // summed once per member of each tie group: sum (c^3 - c)
        }
    }
    double ss = 0.0;
    for (double r : rsum) ss += r * r;
    const double chi = 12.0 / (n * t * (t + 1.0)) * ss - 3.0 * n * (t + 1.0);
    return chi / (1.0 - tie_sum / (n * (t * t * t - t)));
}

ScoreMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    std::vector<double> v;
    for (const auto& r : rows) v.insert(v.end(), r.begin(), r.end());
    return ScoreMatrix(rows.size(), rows.front().size(), v);
}

} // namespace

TEST_SUITE("score matrix") {
    TEST_CASE("shape and value checks") {
        CHECK_THROWS_AS(ScoreMatrix(1, 3, {1, 2, 3}), ValidationError);
        CHECK_THROWS_AS(ScoreMatrix(2, 1, {1, 2}), ValidationError);
        CHECK_THROWS_AS(ScoreMatrix(2, 2, {1, 2, 3}), ValidationError);
        CHECK_THROWS_AS(ScoreMatrix(2, 2, {1, 2, 3, NAN}), ValidationError);
        CHECK_THROWS_AS(ScoreMatrix(2, 2, {1, 2, 3, 4}, {"a"}), ValidationError);
        ScoreMatrix m(2, 2, {1, 2, 3, 4});
        CHECK(m.treatments() == std::vector<std::string>{"t1", "t2"});
        CHECK(m.column(1) == std::vector<double>{2, 4});
        CHECK(m.at(1, 0) == 3);
    }

    TEST_CASE("descending ranks with ties") {
        CHECK(descending_ranks(std::vector<double>{0.9, 0.5, 0.1}) == std::vector<double>{1, 2, 3});
        CHECK(descending_ranks(std::vector<double>{0.6, 0.6, 0.3}) == std::vector<double>{1.5, 1.5, 3});
        CHECK(descending_ranks(std::vector<double>{1, 1, 1, 1}) == std::vector<double>{2.5, 2.5, 2.5, 2.5});
    }
}

TEST_SUITE("friedman") {
    TEST_CASE("constant rows") {
        auto r = friedman_test(ScoreMatrix(3, 4, std::vector<double>(12, 0.7)));
        CHECK(r.statistic == 0.0);
        CHECK(r.p_value == 1.0);
    }

    TEST_CASE("oracle values on a 4x3 matrix") {
        auto r = friedman_test(from_rows({{.9, .5, .1}, {.8, .7, .2}, {.6, .6, .3}, {.2, .9, .4}}));
        CHECK(r.statistic == doctest::Approx(3.6).epsilon(1e-12));
        CHECK(r.p_value == doctest::Approx(0.16529888822158653).epsilon(1e-10));
        CHECK(r.avg_ranks == std::vector<double>{1.625, 1.625, 2.75});
    }

    TEST_CASE("dominating treatment gets rank 1") {
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> u(0, 1);
        std::vector<double> v;
        for (int r = 0; r < 23; ++r) {
            for (int c = 0; c < 6; ++c) v.push_back(c == 2 ? 2.0 + u(rng) : u(rng));
        }
        auto f = friedman_test(ScoreMatrix(23, 6, v));
        CHECK(f.avg_ranks[2] == 1.0);
        CHECK(f.p_value < 0.05);
    }

    TEST_CASE("statistic matches the rank formula and ranks sum correctly") {
        std::mt19937_64 rng(42);
        for (int t = 0; t < 100; ++t) {
            const std::size_t n = 2 + rng() % 10, k = 2 + rng() % 5;
            std::vector<std::vector<double>> rows(n, std::vector<double>(k));
            bool any_variation = false;
            for (auto& r : rows) {
                for (auto& x : r) x = static_cast<double>(rng() % 4);
                any_variation |= std::any_of(r.begin(), r.end(), [&](double x) { return x != r.front(); });
            }
            auto f = friedman_test(from_rows(rows));
            const double total = std::accumulate(f.avg_ranks.begin(), f.avg_ranks.end(), 0.0);
            CHECK(total == doctest::Approx(static_cast<double>(k * (k + 1)) / 2.0));
            if (any_variation) {
                CHECK(f.statistic == doctest::Approx(friedman_by_formula(rows)).epsilon(1e-10));
            }
            CHECK(f.p_value >= 0.0);
            CHECK(f.p_value <= 1.0);
        }
    }
}

TEST_SUITE("wilcoxon") {
    TEST_CASE("identical samples") {
        std::vector<double> a{1, 2, 3, 4, 5};
        auto r = wilcoxon_signed_rank(a, a);
        CHECK(r.p_value == 1.0);
        CHECK(r.n_used == 0);
    }

    TEST_CASE("all positive differences, n=6") {
        std::vector<double> a{1, 2, 3, 4, 5, 6}, b(6, 0.0);
        auto r = wilcoxon_signed_rank(a, b);
        CHECK(r.exact);
        CHECK(r.w_plus == 21.0);
        CHECK(r.p_value == doctest::Approx(0.03125).epsilon(1e-12));
    }

    TEST_CASE("oracle values") {
        std::vector<double> a{.61, .55, .72, .43, .66, .58, .49, .70}, b{.52, .57, .60, .41, .59, .50, .51, .62};
        CHECK(wilcoxon_signed_rank(a, b).p_value == doctest::Approx(0.046875).epsilon(1e-12));

        std::vector<double> c(20), d(20);
        const double shift[] = {-3, 1, -2, -5, 4, -1, -6, -2, -7, 3, -4, -8, -1, -9, 2, -3, -5, -6, -2, -4};
        for (int i = 0; i < 20; ++i) {
            c[i] = i + 1;
            d[i] = c[i] + shift[i];
        }
        auto r = wilcoxon_signed_rank(c, d);
        CHECK_FALSE(r.exact);
        CHECK(r.p_value == doctest::Approx(0.00446583870381216).epsilon(1e-9));
    }

    TEST_CASE("exact branch matches full sign enumeration") {
        std::mt19937_64 rng(43);
        for (int t = 0; t < 200; ++t) {
            const std::size_t n = 1 + rng() % 10;
            std::vector<double> a(n), b(n);
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = static_cast<double>(rng() % 7);
                b[i] = static_cast<double>(rng() % 7);
            }
            auto r = wilcoxon_signed_rank(a, b, WilcoxonMethod::Exact);
            if (r.n_used == 0) {
                CHECK(r.p_value == 1.0);
                continue;
            }
            CHECK(r.p_value == doctest::Approx(wilcoxon_by_enumeration(a, b)).epsilon(1e-12));
        }
    }

    TEST_CASE("normal branch tracks the exact branch at n=12") {
        std::mt19937_64 rng(44);
        std::normal_distribution<double> g;
        for (int t = 0; t < 100; ++t) {
            std::vector<double> a(12), b(12);
            for (int i = 0; i < 12; ++i) {
                a[i] = g(rng) + 0.3;
                b[i] = g(rng);
            }
            auto ex = wilcoxon_signed_rank(a, b, WilcoxonMethod::Exact);
            auto nm = wilcoxon_signed_rank(a, b, WilcoxonMethod::Normal);
            CHECK(std::abs(ex.p_value - nm.p_value) <= 0.02);
        }
    }

    TEST_CASE("length mismatch") {
        CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<double>{1, 2}, std::vector<double>{1}), ValidationError);
    }
}

TEST_SUITE("holm") {
    TEST_CASE("hand-computed case") {
        auto h = holm_adjust(std::vector<double>{0.01, 0.04, 0.03});
        CHECK(h[0] == doctest::Approx(0.03));
        CHECK(h[1] == doctest::Approx(0.06));
        CHECK(h[2] == doctest::Approx(0.06));
        CHECK(holm_adjust(std::vector<double>{0.2}) == std::vector<double>{0.2});
        CHECK(holm_adjust(std::vector<double>{1, 1, 1}) == std::vector<double>{1, 1, 1});
        CHECK_THROWS_AS(holm_adjust(std::vector<double>{0.5, 1.5}), ValidationError);
    }

    TEST_CASE("adjusted p dominates raw p and is capped") {
        std::mt19937_64 rng(45);
        std::uniform_real_distribution<double> u(0, 1);
        for (int t = 0; t < 200; ++t) {
            std::vector<double> p(1 + rng() % 15);
            for (auto& x : p) x = u(rng) * u(rng);
            auto h = holm_adjust(p);
            std::vector<std::size_t> order(p.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(), [&](auto a, auto b) { return p[a] < p[b]; });
            for (std::size_t i = 0; i < p.size(); ++i) {
                CHECK(h[i] >= p[i]);
                CHECK(h[i] <= 1.0);
                if (i > 0) CHECK(h[order[i]] >= h[order[i - 1]]);
            }
        }
    }
}

TEST_SUITE("report") {
    TEST_CASE("constant columns: no pairwise tests") {
        auto r = compare_treatments(ScoreMatrix(5, 3, std::vector<double>(15, 0.4)));
        CHECK(r.friedman_p == 1.0);
        CHECK_FALSE(r.pairwise_run);
        CHECK(r.pairwise.empty());
        REQUIRE(r.groups.size() == 1);
        CHECK(r.groups[0].size() == 3);
    }

    TEST_CASE("random 23x6 matrix report") {
        std::mt19937_64 rng(46);
        std::uniform_real_distribution<double> u(0, 1);
        std::vector<double> v(23 * 6);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = u(rng) + 0.08 * static_cast<double>(i % 6);
        auto r = compare_treatments(ScoreMatrix(23, 6, v), {0.05, false});
        CHECK(r.pairwise_run);
        CHECK(r.pairwise.size() == 15);
        for (const auto& p : r.pairwise) {
            CHECK(p.adjusted_p >= p.raw_p);
            CHECK(p.adjusted_p <= 1.0);
            CHECK(p.significant == (p.adjusted_p <= 0.05));
        }
        const double total = std::accumulate(r.avg_ranks.begin(), r.avg_ranks.end(), 0.0);
        CHECK(total == doctest::Approx(21.0));
        auto j = nlohmann::json::parse(report_to_json(r));
        CHECK(j["pairwise"].size() == 15);
        CHECK(j["avg_ranks"].size() == 6);
        auto csv = rank_table_csv(r);
        CHECK(csv.rfind("treatment,avg_rank\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    }

    TEST_CASE("gating on friedman") {
        // near-identical treatments: friedman does not reject, so no pairwise tests unless forced
        std::mt19937_64 rng(47);
        std::uniform_real_distribution<double> u(0, 1);
        std::vector<double> v(10 * 3);
        for (auto& x : v) x = u(rng);
        ScoreMatrix m(10, 3, v);
        auto gated = compare_treatments(m);
        if (gated.friedman_p >= 0.05) {
            CHECK_FALSE(gated.pairwise_run);
            auto forced = compare_treatments(m, {0.05, false});
            CHECK(forced.pairwise_run);
            CHECK(forced.pairwise.size() == 3);
        }
    }

    TEST_CASE("groups cover rank-adjacent non-significant runs") {
        // clearly separated treatments: every pair significant, singleton groups
        std::vector<double> v;
        for (int r = 0; r < 15; ++r) {
            for (int c = 0; c < 3; ++c) v.push_back(10.0 * (3 - c) + 0.01 * r);
        }
        auto rep = compare_treatments(ScoreMatrix(15, 3, v));
        CHECK(rep.pairwise_run);
        for (const auto& p : rep.pairwise) CHECK(p.significant);
        for (const auto& g : rep.groups) CHECK(g.size() == 1);
    }
}
