// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ouq/core/measures.hpp"
#include "ouq/eval/metrics.hpp"
#include "ouq/eval/record.hpp"
#include "ouq/eval/rejection.hpp"
#include "ouq/eval/roc.hpp"
#include "ouq/pipeline/experiment.hpp"
#include "ouq/pipeline/soft_label.hpp"
#include "ouq/stats/tests.hpp"
#include "support.hpp"

using namespace ouq;
using ouq::testing::random_distribution;
using ouq::testing::random_ensemble;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// accumulates failures; keeps only the first few messages
class Checker {
public:
    void expect(bool cond, const std::string& what) {
        if (cond) return;
        ++failures_;
        if (failures_ <= 3) notes_ << (failures_ > 1 ? "; " : "") << what;
    }
    void note(const std::string& s) { extra_ += (extra_.empty() ? "" : ", ") + s; }
    Outcome done() const {
        std::string d = notes_.str();
        if (failures_ > 3) d += "; +" + std::to_string(failures_ - 3) + " more";
        if (!extra_.empty()) d = extra_ + (d.empty() ? "" : " | " + d);
        return {failures_ == 0, d};
    }

private:
    int failures_ = 0;
    std::ostringstream notes_;
    std::string extra_;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

double log2_safe(double x) { return x > 0.0 ? std::log2(x) : 0.0; }

// 1 ----------------------------------------------------------------------------
Outcome decomposition_identities() {
    Checker c;
    std::mt19937_64 rng(1001);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int k = 2 + static_cast<int>(rng() % 7);
        const int m = 1 + static_cast<int>(rng() % 10);
        const auto e = random_ensemble(rng, k, m, 0.1);
        const auto pbar = posterior_mean(e);

        // mutual information as the mean KL divergence of members from the mean
        double mi = 0.0;
        for (const auto& p : e.members()) {
            for (int j = 0; j < k; ++j) {
                if (p[j] > 0.0) mi += p[j] * (std::log2(p[j]) - log2_safe(pbar[j])) / m;
            }
        }
        double h_mean = 0.0;
        for (const auto& p : e.members()) {
            for (int j = 0; j < k; ++j) h_mean -= p[j] * log2_safe(p[j]) / m;
        }
        const auto ent = decompose_entropy(e, 2.0);
        const double ent_gap = std::abs(ent.tu - (h_mean + mi));
        c.expect(ent_gap <= 1e-9, "ent identity off by " + num(ent_gap));
        c.expect(std::abs(ent.eu - mi) <= 1e-9, "ent EU differs from mutual information");

        // law of total variance with the spread of member means computed directly
        double mu_bar = 0.0;
        for (int j = 0; j < k; ++j) mu_bar += (j + 1) * pbar[j];
        double var_of_means = 0.0, mean_of_vars = 0.0;
        for (const auto& p : e.members()) {
            double mu = 0.0, sq = 0.0;
            for (int j = 0; j < k; ++j) {
                mu += (j + 1) * p[j];
                sq += (j + 1) * (j + 1) * p[j];
            }
            var_of_means += (mu - mu_bar) * (mu - mu_bar) / m;
            mean_of_vars += (sq - mu * mu) / m;
        }
        const auto var = decompose_variance(e);
        const double var_gap = std::abs(var.tu - (mean_of_vars + var_of_means));
        c.expect(var_gap <= 1e-9, "var identity off by " + num(var_gap));
        c.expect(std::abs(var.tu - (var.au + var.eu)) <= 1e-9, "var TU != AU + EU");
        worst = std::max({worst, ent_gap, var_gap});
    }
    c.note("max gap " + num(worst));
    return c.done();
}

// 2 ----------------------------------------------------------------------------
Outcome maximizers() {
    Checker c;
    std::mt19937_64 rng(2002);
    auto tu = [](const ProbabilityVector& p, MeasureKind m) {
        return compute_uncertainty(EnsemblePrediction({p}), m).tu;
    };
    for (int k = 3; k <= 5; ++k) {
        std::vector<double> bim(k, 0.0);
        bim.front() = bim.back() = 0.5;
        const ProbabilityVector bimodal(bim);
        const auto uniform = ProbabilityVector::uniform(k);
        const double cap_oe = tu(bimodal, MeasureKind::OrdEnt), cap_ov = tu(bimodal, MeasureKind::OrdVar);
        const double cap_e = tu(uniform, MeasureKind::Ent);
        for (int t = 0; t < 10000; ++t) {
            const auto p = random_distribution(rng, k, t % 4 == 0 ? 0.3 : 0.0);
            c.expect(tu(p, MeasureKind::OrdEnt) <= cap_oe + 1e-12, "ord-ent exceeds bimodal at K=" + std::to_string(k));
            c.expect(tu(p, MeasureKind::OrdVar) <= cap_ov + 1e-12, "ord-var exceeds bimodal at K=" + std::to_string(k));
            c.expect(tu(p, MeasureKind::Ent) <= cap_e + 1e-12, "ent exceeds uniform at K=" + std::to_string(k));
        }
    }
    return c.done();
}

// 3 ----------------------------------------------------------------------------
Outcome permutations() {
    Checker c;
    std::mt19937_64 rng(3003);
    double drift = 0.0;
    for (int t = 0; t < 100; ++t) {
        const int k = 2 + static_cast<int>(rng() % 7);
        const int m = 1 + static_cast<int>(rng() % 6);
        const auto e = random_ensemble(rng, k, m, 0.1);
        std::vector<int> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<ProbabilityVector> permuted;
        for (const auto& p : e.members()) {
            std::vector<double> q(k);
            for (int j = 0; j < k; ++j) q[perm[j]] = p[j];
            permuted.emplace_back(std::move(q));
        }
        const EnsemblePrediction ep(std::move(permuted));
        for (auto mk : {MeasureKind::Ent, MeasureKind::BinEnt, MeasureKind::BinVar}) {
            const double d = std::abs(compute_uncertainty(e, mk).tu - compute_uncertainty(ep, mk).tu);
            drift = std::max(drift, d);
            c.expect(d <= 1e-12, std::string(to_string(mk)) + " drifts by " + num(d));
        }
    }
    const double adjacent = compute_uncertainty(EnsemblePrediction({ProbabilityVector{0.5, 0.5, 0.0}}),
                                                MeasureKind::OrdEnt).tu;
    const double extreme = compute_uncertainty(EnsemblePrediction({ProbabilityVector{0.5, 0.0, 0.5}}),
                                               MeasureKind::OrdEnt).tu;
    c.expect(adjacent == 1.0, "ord-ent(0.5,0.5,0) = " + num(adjacent));
    c.expect(extreme == 2.0, "ord-ent(0.5,0,0.5) = " + num(extreme));
    c.note("max drift " + num(drift));
    return c.done();
}

// 4 ----------------------------------------------------------------------------
Outcome prr_and_auc() {
    Checker c;
    std::size_t cases = 0;
    for (std::size_t n = 1; n <= 6; ++n) {
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            std::vector<double> err(n);
            for (std::size_t i = 0; i < n; ++i) err[i] = (mask >> i) & 1u;
            const bool mixed = std::any_of(err.begin(), err.end(), [](double e) { return e == 0.0; }) &&
                               std::any_of(err.begin(), err.end(), [](double e) { return e == 1.0; });
            if (!mixed) continue;  // oracle and random coincide, PRR is undefined
            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            do {
                std::vector<double> score(n);
                for (std::size_t i = 0; i < n; ++i) score[i] = static_cast<double>(n - perm[i]);
                bool consistent = true;
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) consistent &= !(err[i] < err[j] && score[i] > score[j]);
                }
                if (!consistent) continue;
                ++cases;
                const double r = prr(err, score).prr;
                c.expect(std::abs(r - 1.0) <= 1e-9, "consistent ordering gives PRR " + num(r));
                std::vector<double> rev(score);
                for (auto& s : rev) s = -s;
                const double rr = prr(err, rev).prr;
                c.expect(rr < 0.0, "reversed ordering gives PRR " + num(rr));
            } while (std::next_permutation(perm.begin(), perm.end()));
        }
    }

    std::mt19937_64 rng(4004);
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 2 + rng() % 60;
        std::vector<double> s(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = static_cast<double>(rng() % 12) / 4.0;  // coarse grid forces ties
            y[i] = static_cast<int>(rng() % 2);
        }
        y[0] = 0;
        y[1] = 1;
        double wins = 0.0, pairs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (y[i] != 1 || y[j] != 0) continue;
                pairs += 1.0;
                wins += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
            }
        }
        const double d = std::abs(auc_roc(s, y) - wins / pairs);
        worst = std::max(worst, d);
        c.expect(d <= 1e-12, "AUC differs from pair counting by " + num(d));
    }
    c.note(std::to_string(cases) + " consistent orderings, AUC max gap " + num(worst));
    return c.done();
}

// 5 ----------------------------------------------------------------------------
double enumerated_wilcoxon_p(const std::vector<double>& d) {
    std::vector<double> nz;
    for (double v : d) {
        if (v != 0.0) nz.push_back(v);
    }
    const std::size_t n = nz.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(nz[a]) < std::abs(nz[b]); });
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(nz[order[j + 1]]) == std::abs(nz[order[i]])) ++j;
        for (std::size_t t = i; t <= j; ++t) rank[order[t]] = (i + j) / 2.0 + 1.0;
        i = j + 1;
    }
    double w = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        total += rank[i];
        if (nz[i] > 0) w += rank[i];
    }
    const double dev = std::abs(w - total / 2.0);
    std::size_t extreme = 0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if ((mask >> i) & 1u) s += rank[i];
        }
        if (std::abs(s - total / 2.0) >= dev - 1e-9) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(1u << n);
}

Outcome statistics() {
    Checker c;
    std::mt19937_64 rng(5005);
    double worst = 0.0;
    for (int t = 0; t < 400; ++t) {
        const std::size_t n = 1 + rng() % 10;
        std::vector<double> a(n), b(n), d(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<double>(rng() % 7);
            b[i] = static_cast<double>(rng() % 7);
            d[i] = a[i] - b[i];
        }
        if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) continue;
        const double p = stats::wilcoxon_signed_rank(a, b, stats::WilcoxonMethod::Exact).p_value;
        const double diff = std::abs(p - enumerated_wilcoxon_p(d));
        worst = std::max(worst, diff);
        c.expect(diff <= 1e-12, "exact Wilcoxon differs from enumeration by " + num(diff));
    }

    const std::vector<double> raw{0.01, 0.04, 0.03};
    const auto holm = stats::holm_adjust(raw);
    const double want[] = {0.03, 0.06, 0.06};
    for (std::size_t i = 0; i < 3; ++i) c.expect(std::abs(holm[i] - want[i]) <= 1e-12, "Holm[" + std::to_string(i) + "] = " + num(holm[i]));

    for (std::size_t cols = 2; cols <= 6; ++cols) {
        const stats::ScoreMatrix m(7, cols, std::vector<double>(7 * cols, 0.42));
        c.expect(stats::friedman_test(m).p_value == 1.0, "Friedman p != 1 on a constant matrix");
    }
    c.note("Wilcoxon max gap " + num(worst));
    return c.done();
}

// 6 ----------------------------------------------------------------------------
Outcome soft_labels() {
    Checker c;
    for (int k = 2; k <= 10; ++k) {
        for (int y = 1; y <= k; ++y) {
            for (int a = 0; a <= 10; ++a) {
                const double alpha = 0.05 * a;
                const auto p = soft_label_geometric(y, k, alpha);
                const double sum = std::accumulate(p.values().begin(), p.values().end(), 0.0);
                c.expect(std::abs(sum - 1.0) <= 1e-12, "sum off by " + num(sum - 1.0));
                if (a == 0) {
                    for (int j = 1; j <= k; ++j) c.expect(p.of_class(j) == (j == y ? 1.0 : 0.0), "alpha=0 is not one-hot");
                }
            }
        }
    }
    const auto p = soft_label_geometric(2, 3, 0.5);
    const double want[] = {0.25, 0.5, 0.25};
    for (std::size_t i = 0; i < 3; ++i) c.expect(std::abs(p[i] - want[i]) <= 1e-15, "K=3 example entry " + std::to_string(i));
    return c.done();
}

// 7 ----------------------------------------------------------------------------
Outcome end_to_end_rejection() {
    Checker c;
    ExperimentConfig config;
    config.datasets.push_back({"synthetic", {}, {}, SyntheticConfig{}, 0});
    const auto runs = run_experiment(config);
    const auto records = pooled_records(runs, "synthetic");
    c.expect(records.size() == 500, "expected 500 pooled records");

    for (auto metric : {ErrorMetric::Mcr, ErrorMetric::Mae}) {
        const auto oracle = rejection_curve(records, metric, RejectionOrdering::Oracle, {MeasureKind::Ent, UncertaintyKind::Total});
        for (std::size_t i = 1; i < oracle.values.size(); ++i) {
            c.expect(oracle.values[i] <= oracle.values[i - 1] + 1e-12, "oracle curve rises (" + std::string(to_string(metric)) + ")");
        }
    }
    double lowest = 1.0;
    int positive = 0;
    for (auto m : kAllMeasures) {
        for (auto k : kAllUncertaintyKinds) {
            for (auto metric : {ErrorMetric::Mcr, ErrorMetric::Mae}) {
                const double r = prr(records, metric, {m, k}).prr;
                lowest = std::min(lowest, r);
                positive += r > 0.0;
                c.expect(r > 0.0, std::string(to_string(m)) + "/" + std::string(to_string(k)) + "/" +
                                      std::string(to_string(metric)) + " PRR " + num(r));
            }
        }
    }
    c.note(std::to_string(positive) + "/36 PRR > 0, min " + num(lowest));
    return c.done();
}

// 8 ----------------------------------------------------------------------------
double mean_eu_auc(const std::vector<ExperimentRun>& runs, MeasureKind m) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& r : runs) {
        for (const auto& cell : r.ood_auc) {
            if (cell.measure == m && cell.kind == UncertaintyKind::Epistemic) {
                sum += cell.auc;
                ++n;
            }
        }
    }
    return sum / static_cast<double>(n);
}

Outcome end_to_end_ood() {
    Checker c;
    ExperimentConfig config;
    config.datasets.push_back({"synthetic", {}, {}, SyntheticConfig{}, 0});
    config.measures = {MeasureKind::Ent, MeasureKind::OrdEnt};

    config.ood = OodConfig{};
    const auto self = run_experiment(config);
    config.ood->shift_sigma = 10.0;
    const auto shifted = run_experiment(config);
    for (auto m : config.measures) {
        const std::string name(to_string(m));
        const double id_auc = mean_eu_auc(self, m), shift_auc = mean_eu_auc(shifted, m);
        c.note(name + " self " + num(id_auc) + " shifted " + num(shift_auc));
        c.expect(id_auc > 0.4 && id_auc < 0.6, name + " self-donor AUC outside (0.4, 0.6)");
        c.expect(shift_auc > 0.9, name + " shifted-donor AUC <= 0.9");
    }
    return c.done();
}

// 9 ----------------------------------------------------------------------------
Outcome rps_identity() {
    Checker c;
    std::mt19937_64 rng(9009);
    std::vector<PredictionRecord> records;
    double emd = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const int k = 2 + static_cast<int>(rng() % 7);
        auto e = random_ensemble(rng, k, 1 + static_cast<int>(rng() % 5), 0.1);
        const int y = 1 + static_cast<int>(rng() % static_cast<unsigned>(k));
        records.push_back(make_record("r" + std::to_string(t), std::move(e), y, std::array{MeasureKind::Ent}));
        emd += emd_loss(records.back().mean, y) / 1000.0;
    }
    const double gap = std::abs(emd - prob_metrics(records).rps);
    c.expect(gap <= 1e-12, "mean emd differs from rps by " + num(gap));
    c.note("gap " + num(gap));
    return c.done();
}

} // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "decomposition identities", 5.0, decomposition_identities},
        {2, "maximizers of ent, ord-ent, ord-var", 10.0, maximizers},
        {3, "class permutation behaviour", 60.0, permutations},
        {4, "PRR exhaustive check and AUC pair counting", 60.0, prr_and_auc},
        {5, "Wilcoxon enumeration, Holm example, Friedman constant", 60.0, statistics},
        {6, "geometric soft labels", 60.0, soft_labels},
        {7, "end-to-end rejection on synthetic 5-class data", 60.0, end_to_end_rejection},
        {8, "end-to-end OOD detection", 30.0, end_to_end_ood},
        {9, "RPS equals mean EMD", 60.0, rps_identity},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs >= cr.budget_s) {
            o.ok = false;
            o.detail += " | over time budget " + num(cr.budget_s) + " s";
        }
        failed += !o.ok;
        std::printf("%s %d %s (%.2f s)%s%s\n", o.ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
                    o.detail.empty() ? "" : ": ", o.detail.c_str());
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
