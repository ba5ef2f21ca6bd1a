// ouq: command-line front end for the ordinal uncertainty toolkit.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ouq/core/simplex.hpp"
#include "ouq/error.hpp"
#include "ouq/eval/rejection.hpp"
#include "ouq/pipeline/csv.hpp"
#include "ouq/pipeline/experiment.hpp"
#include "ouq/pipeline/interchange.hpp"
#include "ouq/pipeline/synthetic.hpp"
#include "ouq/render/svg.hpp"
#include "ouq/stats/report.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace ouq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDegenerate = 1;
constexpr int kExitInput = 2;

fs::path default_out() {
    const char* env = std::getenv("OUQ_OUT");
    return env && *env ? fs::path(env) : fs::path("ouq-out");
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(const ordered_json& summary) { std::cout << summary.dump() << std::endl; }

std::string fmt(double v) { return csv::format_double(v); }

// --- measure -----------------------------------------------------------------

struct MeasureArgs {
    fs::path input;
    std::string measures = "all";
    double log_base = kDefaultLogBase;
    fs::path out;
};

int cmd_measure(const MeasureArgs& a) {
    const auto measures = parse_measure_list(a.measures);
    const auto records = import_predictions(a.input, measures, a.log_base);
    std::string body = "instance_id,measure,tu,au,eu\n";
    for (const auto& r : records) {
        for (auto m : measures) {
            const auto& t = r.triple(m);
            body += csv::escape(r.instance_id) + ',' + std::string(to_string(m)) + ',' + fmt(t.tu) + ',' + fmt(t.au) +
                    ',' + fmt(t.eu) + '\n';
        }
    }
    const auto path = a.out / "uncertainty.csv";
    csv::write_text_file(path, body);
    emit({{"command", "measure"},
          {"instances", records.size()},
          {"rows", records.size() * measures.size()},
          {"output", path.string()}});
    return kExitOk;
}

// --- evaluate / ood ------------------------------------------------------------

struct EvaluateArgs {
    fs::path config;
    fs::path out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> folds;
    std::string measures;
    std::string metrics;
    bool oracle_only = false;
    bool stratified = false;
};

ExperimentConfig load_with_overrides(const EvaluateArgs& a) {
    auto config = load_config(a.config);
    if (a.seed) config.seed = *a.seed;
    if (a.folds) config.folds = *a.folds;
    if (a.stratified) config.stratified = true;
    if (!a.measures.empty()) config.measures = parse_measure_list(a.measures);
    if (!a.metrics.empty()) {
        config.metrics.clear();
        std::string_view rest = a.metrics;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            config.metrics.push_back(parse_error_metric(rest.substr(0, comma)));
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
    }
    config.validate();
    return config;
}

std::vector<std::string> dataset_ids(const std::vector<ExperimentRun>& runs) {
    std::vector<std::string> ids;
    for (const auto& r : runs) {
        if (std::find(ids.begin(), ids.end(), r.dataset_id) == ids.end()) ids.push_back(r.dataset_id);
    }
    return ids;
}

void append_curve(std::string& out, const std::string& prefix, const RejectionCurve& c) {
    for (std::size_t i = 0; i < c.fractions.size(); ++i) {
        out += prefix + std::string(to_string(c.ordering)) + ',' + fmt(c.fractions[i]) + ',' + fmt(c.values[i]) + '\n';
    }
}

render::Series as_series(const std::string& name, const RejectionCurve& c) { return {name, c.fractions, c.values}; }

int cmd_evaluate(const EvaluateArgs& a) {
    const auto config = load_with_overrides(a);
    const auto runs = run_experiment(config);
    write_results(runs, a.out, utc_timestamp());
    csv::write_text_file(a.out / "config.json", config_to_json(config));

    std::string curves = "dataset,measure,kind,metric,ordering,fraction,value\n";
    std::string prr_table = "dataset,measure,kind,metric,ar_unc,ar_orc,prr\n";
    std::size_t curve_count = 0, svg_count = 0, degenerate = 0;
    for (const auto& id : dataset_ids(runs)) {
        const auto records = pooled_records(runs, id);
        for (auto metric : config.metrics) {
            const std::string mname(to_string(metric));
            const ScoreSelector any{config.measures.front(), UncertaintyKind::Total};
            const auto oracle = rejection_curve(records, metric, RejectionOrdering::Oracle, any);
            const auto random = rejection_curve(records, metric, RejectionOrdering::RandomAnalytic, any);
            if (a.oracle_only) {
                append_curve(curves, csv::escape(id) + ",,," + mname + ',', oracle);
                ++curve_count;
                csv::write_text_file(a.out / "svg" / (id + "_" + mname + "_oracle.svg"),
                                     render::line_chart_svg({as_series("oracle", oracle)},
                                                            {id + ": oracle rejection (" + mname + ")",
                                                             "rejection fraction", mname}));
                ++svg_count;
                continue;
            }
            for (auto measure : config.measures) {
                const std::string meas(to_string(measure));
                std::vector<render::Series> traces;
                for (auto kind : kAllUncertaintyKinds) {
                    const std::string kname(to_string(kind));
                    const auto curve = rejection_curve(records, metric, RejectionOrdering::Uncertainty, {measure, kind});
                    append_curve(curves, csv::escape(id) + ',' + meas + ',' + kname + ',' + mname + ',', curve);
                    ++curve_count;
                    traces.push_back(as_series(kname, curve));
                    prr_table += csv::escape(id) + ',' + meas + ',' + kname + ',' + mname + ',';
                    try {
                        const auto r = prr(records, metric, {measure, kind});
                        prr_table += fmt(r.ar_unc) + ',' + fmt(r.ar_orc) + ',' + fmt(r.prr) + '\n';
                    } catch (const DegenerateError&) {
                        prr_table += ",,\n";
                        ++degenerate;
                    }
                }
                traces.push_back(as_series("oracle", oracle));
                traces.push_back(as_series("random", random));
                csv::write_text_file(a.out / "svg" / (id + "_" + meas + "_" + mname + ".svg"),
                                     render::line_chart_svg(traces, {id + ": " + meas + " rejection (" + mname + ")",
                                                                     "rejection fraction", mname}));
                ++svg_count;
            }
        }
    }
    csv::write_text_file(a.out / "curves.csv", curves);
    if (!a.oracle_only) csv::write_text_file(a.out / "prr.csv", prr_table);

    emit({{"command", "evaluate"},
          {"config_hash", config_hash(config)},
          {"units", runs.size()},
          {"curves", curve_count},
          {"svgs", svg_count},
          {"undefined_prr", degenerate},
          {"output", a.out.string()}});
    return degenerate ? kExitDegenerate : kExitOk;
}

struct OodArgs {
    EvaluateArgs base;
    std::string donor = "self";
    fs::path donor_schema;
    double shift_sigma = 0.0;
};

int cmd_ood(const OodArgs& a) {
    auto config = load_with_overrides(a.base);
    OodConfig ood;
    if (a.donor != "self") {
        ood.donor = a.donor;
        if (!fs::exists(ood.donor)) throw SchemaError("donor file not found: " + a.donor);
        ood.donor_schema = a.donor_schema;
    }
    ood.shift_sigma = a.shift_sigma;
    config.ood = ood;
    config.validate();
    const auto runs = run_experiment(config);

    // mean AUC over folds per (dataset, measure, kind)
    std::map<std::tuple<std::string, MeasureKind, UncertaintyKind>, std::pair<double, std::size_t>> acc;
    for (const auto& run : runs) {
        for (const auto& cell : run.ood_auc) {
            auto& slot = acc[{run.dataset_id, cell.measure, cell.kind}];
            slot.first += cell.auc;
            ++slot.second;
        }
    }
    std::string table = "dataset,measure,kind,auc\n";
    ordered_json eu = ordered_json::object();
    for (const auto& id : dataset_ids(runs)) {
        for (auto m : config.measures) {
            for (auto k : kAllUncertaintyKinds) {
                const auto& [sum, n] = acc.at({id, m, k});
                const double mean = sum / static_cast<double>(n);
                table += csv::escape(id) + ',' + std::string(to_string(m)) + ',' + std::string(to_string(k)) + ',' +
                         fmt(mean) + '\n';
                if (k == UncertaintyKind::Epistemic) eu[id + ":" + std::string(to_string(m))] = mean;
            }
        }
    }
    write_results(runs, a.base.out, utc_timestamp());
    csv::write_text_file(a.base.out / "ood_auc.csv", table);
    emit({{"command", "ood"}, {"units", runs.size()}, {"eu_auc", eu}, {"output", (a.base.out / "ood_auc.csv").string()}});
    return kExitOk;
}

// --- stats -----------------------------------------------------------------------

struct StatsArgs {
    fs::path summary;
    std::string pooling = "both";
    std::string kind = "tu";
    std::string blocks = "dataset";
    double alpha = stats::kDefaultAlpha;
    bool always_pairwise = false;
    fs::path out;
};

int cmd_stats(const StatsArgs& a) {
    const auto rows = csv::parse(csv::read_text_file(a.summary));
    const std::vector<std::string> expected{"dataset", "fold", "measure", "kind", "metric", "value"};
    if (rows.empty() || rows.front().fields != expected) {
        throw SchemaError("summary header must be dataset,fold,measure,kind,metric,value", rows.empty() ? 1 : rows[0].line);
    }
    std::set<std::string> metrics;
    if (a.pooling == "both") metrics = {"mcr", "mae"};
    else metrics = {a.pooling};
    std::set<std::string> kinds;
    if (a.kind == "all") {
        for (auto k : kAllUncertaintyKinds) kinds.insert(std::string(to_string(k)));
    } else {
        kinds.insert(std::string(to_string(parse_uncertainty_kind(a.kind))));
    }

    // block -> treatment -> (sum, count); folds are averaged unless blocks=fold
    std::map<std::string, std::map<std::string, std::pair<double, std::size_t>>> cells;
    std::vector<std::string> treatments;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i].fields;
        if (f.size() != expected.size()) throw SchemaError("summary row has wrong field count", rows[i].line);
        if (!metrics.count(f[4]) || !kinds.count(f[3])) continue;
        parse_measure(f[2]);
        const std::string treatment = a.kind == "all" ? f[2] + ":" + f[3] : f[2];
        std::string block = f[0] + "|" + f[4];
        if (a.blocks == "fold") block += "|" + f[1];
        auto& slot = cells[block][treatment];
        slot.first += csv::parse_double(f[5], rows[i].line, "value");
        ++slot.second;
        if (std::find(treatments.begin(), treatments.end(), treatment) == treatments.end()) treatments.push_back(treatment);
    }
    if (cells.empty()) throw ValidationError("summary has no rows for pooling '" + a.pooling + "'");
    std::vector<double> values;
    for (const auto& [block, row] : cells) {
        for (const auto& t : treatments) {
            auto it = row.find(t);
            if (it == row.end()) throw ValidationError("block '" + block + "' lacks treatment '" + t + "'");
            values.push_back(it->second.first / static_cast<double>(it->second.second));
        }
    }
    const stats::ScoreMatrix matrix(cells.size(), treatments.size(), std::move(values), treatments);
    const auto report = stats::compare_treatments(matrix, {a.alpha, !a.always_pairwise});

    csv::write_text_file(a.out / "report.json", stats::report_to_json(report));
    csv::write_text_file(a.out / "ranks.csv", stats::rank_table_csv(report));
    csv::write_text_file(a.out / "cd.svg", render::cd_diagram_svg(report, "average ranks (" + a.pooling + ")"));
    emit({{"command", "stats"},
          {"blocks", matrix.rows()},
          {"treatments", matrix.cols()},
          {"friedman_p", report.friedman_p},
          {"pairwise_run", report.pairwise_run},
          {"output", a.out.string()}});
    return kExitOk;
}

// --- heatmap ---------------------------------------------------------------------

struct HeatmapArgs {
    std::string measure = "ent";
    double grid_step = 0.01;
    double log_base = kDefaultLogBase;
    int k = 3;
    fs::path out;
};

int cmd_heatmap(const HeatmapArgs& a) {
    const auto m = parse_measure(a.measure);
    const auto cells = simplex_heatmap(m, a.grid_step, a.log_base, a.k);
    std::string body;
    for (int k = 1; k <= a.k; ++k) body += "p_" + std::to_string(k) + ',';
    body += "tu\n";
    std::size_t best = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t k = 0; k < cells[i].p.size(); ++k) body += fmt(cells[i].p[k]) + ',';
        body += fmt(cells[i].tu) + '\n';
        if (cells[i].tu > cells[best].tu) best = i;
    }
    const std::string stem = "heatmap_" + a.measure;
    csv::write_text_file(a.out / (stem + ".csv"), body);
    if (a.k == 3) {
        csv::write_text_file(a.out / (stem + ".svg"),
                             render::simplex_heatmap_svg(cells, a.grid_step, "total uncertainty: " + a.measure));
    }
    const auto v = cells[best].p.values();
    emit({{"command", "heatmap"},
          {"measure", a.measure},
          {"cells", cells.size()},
          {"max_tu", cells[best].tu},
          {"argmax", std::vector<double>(v.begin(), v.end())},
          {"output", (a.out / (stem + ".csv")).string()}});
    return kExitOk;
}

// --- synth -----------------------------------------------------------------------

struct SynthArgs {
    SyntheticConfig cfg;
    std::uint64_t seed = 0;
    std::string id = "synthetic";
    fs::path out;
};

int cmd_synth(const SynthArgs& a) {
    const auto d = make_synthetic_ordinal(a.cfg, a.seed, a.id);
    DatasetSchema schema;
    schema.label_column = "label";
    for (int k = 1; k <= d.k_count; ++k) schema.label_order.push_back(std::to_string(k));
    schema.k_count = d.k_count;
    for (const auto& c : d.columns) {
        if (c.kind == ColumnKind::Categorical) schema.categorical.push_back(c.name);
    }
    csv::write_text_file(a.out / (a.id + ".csv"), dataset_to_csv(d));
    csv::write_text_file(a.out / (a.id + ".schema.json"), schema_to_json(schema));
    ordered_json config{{"datasets", {{{"id", a.id}, {"csv", a.id + ".csv"}, {"schema", a.id + ".schema.json"}}}},
                        {"seed", a.seed}};
    csv::write_text_file(a.out / (a.id + ".config.json"), config.dump(2) + "\n");
    emit({{"command", "synth"}, {"rows", d.size()}, {"k", d.k_count}, {"output", a.out.string()}});
    return kExitOk;
}

void add_evaluate_flags(CLI::App* sub, EvaluateArgs& a) {
    sub->add_option("--config", a.config, "run configuration (JSON)")->required();
    sub->add_option("--out", a.out, "output directory (default $OUQ_OUT or ./ouq-out)");
    sub->add_option("--seed", a.seed, "master seed override");
    sub->add_option("--folds", a.folds, "number of cross-validation folds")->check(CLI::Range(2, 1000));
    sub->add_option("--measures", a.measures, "comma list of measures or 'all'");
    sub->add_option("--metrics", a.metrics, "comma list of error metrics (mcr,mae,mse)");
    sub->add_flag("--stratified", a.stratified, "stratify folds by label");
}

template <typename F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const DegenerateError& e) {
        std::cerr << "ouq: undefined result: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const NumericalError& e) {
        std::cerr << "ouq: numerical failure: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const SchemaError& e) {
        std::cerr << "ouq: schema error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ValidationError& e) {
        std::cerr << "ouq: invalid input: " << e.what() << '\n';
        return kExitInput;
    } catch (const IndexError& e) {
        std::cerr << "ouq: invalid input: " << e.what() << '\n';
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "ouq: malformed JSON: " << e.what() << '\n';
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "ouq: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "ouq: " << e.what() << '\n';
        return kExitDegenerate;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uncertainty measures and evaluation for ordinal classification ensembles", "ouq"};
    app.require_subcommand(1);
    const fs::path out_root = default_out();

    MeasureArgs measure;
    measure.out = out_root;
    auto* sub_measure = app.add_subcommand("measure", "per-instance TU/AU/EU for imported member predictions");
    sub_measure->add_option("--input", measure.input, "prediction file (.csv or .json)")->required();
    sub_measure->add_option("--measures", measure.measures, "comma list of measures or 'all'");
    sub_measure->add_option("--log-base", measure.log_base, "logarithm base of entropy measures");
    sub_measure->add_option("--out", measure.out, "output directory");

    EvaluateArgs evaluate;
    evaluate.out = out_root;
    auto* sub_evaluate = app.add_subcommand("evaluate", "cross-validated rejection curves and PRR table");
    add_evaluate_flags(sub_evaluate, evaluate);
    sub_evaluate->add_flag("--oracle-only", evaluate.oracle_only, "emit only the oracle trace per metric");

    OodArgs ood;
    ood.base.out = out_root;
    auto* sub_ood = app.add_subcommand("ood", "out-of-distribution detection AUC table");
    add_evaluate_flags(sub_ood, ood.base);
    sub_ood->add_option("--donor", ood.donor, "donor CSV, or 'self' for the in-distribution data");
    sub_ood->add_option("--donor-schema", ood.donor_schema, "schema of the donor CSV");
    sub_ood->add_option("--shift-sigma", ood.shift_sigma, "shift donor numeric columns by this many std devs");

    StatsArgs st;
    st.out = out_root;
    auto* sub_stats = app.add_subcommand("stats", "Friedman / Wilcoxon-Holm comparison of measures");
    sub_stats->add_option("--summary", st.summary, "summary.csv from evaluate or ood")->required();
    sub_stats->add_option("--pooling", st.pooling, "which metric rows form blocks")
        ->check(CLI::IsMember({"mcr", "mae", "mse", "both", "ood-auc"}));
    sub_stats->add_option("--kind", st.kind, "uncertainty kind compared (tu, au, eu or all)")
        ->check(CLI::IsMember({"tu", "au", "eu", "all"}));
    sub_stats->add_option("--blocks", st.blocks, "one block per dataset (folds averaged) or per fold")
        ->check(CLI::IsMember({"dataset", "fold"}));
    sub_stats->add_option("--alpha", st.alpha, "significance level")->check(CLI::Range(1e-9, 0.5));
    sub_stats->add_flag("--always-pairwise", st.always_pairwise, "run pairwise tests even if Friedman does not reject");
    sub_stats->add_option("--out", st.out, "output directory");

    HeatmapArgs heat;
    heat.out = out_root;
    auto* sub_heat = app.add_subcommand("heatmap", "total uncertainty over the probability simplex");
    sub_heat->add_option("--measure", heat.measure, "measure name");
    sub_heat->add_option("--grid-step", heat.grid_step, "lattice spacing (1/step must be an integer)");
    sub_heat->add_option("--log-base", heat.log_base, "logarithm base of entropy measures");
    sub_heat->add_option("--k", heat.k, "number of classes")->check(CLI::Range(2, 8));
    sub_heat->add_option("--out", heat.out, "output directory");

    SynthArgs synth;
    synth.out = out_root;
    auto* sub_synth = app.add_subcommand("synth", "write a synthetic ordinal dataset with schema and config");
    sub_synth->add_option("--n", synth.cfg.n, "rows");
    sub_synth->add_option("--k", synth.cfg.k, "classes");
    sub_synth->add_option("--numeric", synth.cfg.numeric, "numeric feature count");
    sub_synth->add_option("--noise", synth.cfg.noise, "latent noise scale");
    sub_synth->add_option("--seed", synth.seed, "generator seed");
    sub_synth->add_option("--id", synth.id, "dataset id (file stem)");
    sub_synth->add_option("--out", synth.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    if (*sub_measure) return guarded([&] { return cmd_measure(measure); });
    if (*sub_evaluate) return guarded([&] { return cmd_evaluate(evaluate); });
    if (*sub_ood) return guarded([&] { return cmd_ood(ood); });
    if (*sub_stats) return guarded([&] { return cmd_stats(st); });
    if (*sub_heat) return guarded([&] { return cmd_heatmap(heat); });
    if (*sub_synth) return guarded([&] { return cmd_synth(synth); });
    return kExitInput;
}
