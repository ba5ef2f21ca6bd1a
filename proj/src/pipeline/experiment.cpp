#include "ouq/pipeline/experiment.hpp"

#include <cstdio>
#include <map>

#include "json.hpp"
#include "ouq/error.hpp"
#include "ouq/eval/roc.hpp"
#include "ouq/pipeline/csv.hpp"
#include "ouq/pipeline/interchange.hpp"
#include "ouq/pipeline/kfold.hpp"
#include "ouq/pipeline/ood.hpp"
#include "ouq/pipeline/preprocess.hpp"

namespace ouq {

using ordered_json = nlohmann::ordered_json;

void ExperimentConfig::validate() const {
    if (measures.empty()) throw ValidationError("config selects no measures");
    if (metrics.empty()) throw ValidationError("config selects no metrics");
    if (datasets.empty() == predictions.empty()) {
        throw ValidationError("config needs exactly one of 'datasets' or 'predictions'");
    }
    if (!predictions.empty() && ood) throw ValidationError("OOD evaluation requires the built-in learner");
    if (folds < 2) throw ValidationError("folds must be >= 2");
    if (!(log_base > 1.0)) throw ValidationError("log base must be > 1");
    learner.validate();
    for (const auto& d : datasets) {
        if (d.id.empty()) throw ValidationError("dataset entries need an id");
        if (!d.synthetic && (d.csv.empty() || d.schema.empty())) {
            throw ValidationError("dataset '" + d.id + "' needs csv and schema paths or a synthetic block");
        }
    }
}

namespace {

template <typename T>
T take(const nlohmann::json& obj, const char* key, T fallback) {
    return obj.contains(key) ? obj.at(key).get<T>() : fallback;
}

void reject_unknown(const nlohmann::json& obj, std::initializer_list<std::string_view> known, std::string_view where) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ValidationError("unknown key '" + key + "' in " + std::string(where));
        }
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    if (p.empty()) return {};
    std::filesystem::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

std::vector<std::string> string_or_list(const nlohmann::json& v) {
    if (v.is_string()) return {v.get<std::string>()};
    return v.get<std::vector<std::string>>();
}

} // namespace

ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c;
    try {
        reject_unknown(j, {"datasets", "predictions", "measures", "metrics", "seed", "folds", "stratified", "log_base",
                           "learner", "ood"},
                       "config");
        if (j.contains("datasets")) {
            for (const auto& d : j.at("datasets")) {
                reject_unknown(d, {"id", "csv", "schema", "synthetic", "seed"}, "dataset entry");
                DatasetSource src;
                src.id = d.at("id").get<std::string>();
                src.csv = resolve(base_dir, take<std::string>(d, "csv", ""));
                src.schema = resolve(base_dir, take<std::string>(d, "schema", ""));
                src.synthetic_seed = take<std::uint64_t>(d, "seed", 0);
                if (d.contains("synthetic")) {
                    const auto& s = d.at("synthetic");
                    reject_unknown(s, {"n", "k", "numeric", "categorical", "noise"}, "synthetic block");
                    SyntheticConfig sc;
                    sc.n = take<std::size_t>(s, "n", sc.n);
                    sc.k = take<int>(s, "k", sc.k);
                    sc.numeric = take<std::size_t>(s, "numeric", sc.numeric);
                    sc.categorical = take<bool>(s, "categorical", sc.categorical);
                    sc.noise = take<double>(s, "noise", sc.noise);
                    src.synthetic = sc;
                }
                c.datasets.push_back(std::move(src));
            }
        }
        c.predictions = resolve(base_dir, take<std::string>(j, "predictions", ""));
        if (j.contains("measures")) {
            c.measures.clear();
            for (const auto& name : string_or_list(j.at("measures"))) {
                for (auto m : parse_measure_list(name)) {
                    if (std::find(c.measures.begin(), c.measures.end(), m) == c.measures.end()) c.measures.push_back(m);
                }
            }
        }
        if (j.contains("metrics")) {
            c.metrics.clear();
            for (const auto& name : string_or_list(j.at("metrics"))) c.metrics.push_back(parse_error_metric(name));
        }
        c.seed = take<std::uint64_t>(j, "seed", c.seed);
        c.folds = take<std::size_t>(j, "folds", c.folds);
        c.stratified = take<bool>(j, "stratified", c.stratified);
        c.log_base = take<double>(j, "log_base", c.log_base);
        if (j.contains("learner")) {
            const auto& l = j.at("learner");
            reject_unknown(l, {"members", "max_depth", "subsample", "min_samples_split", "smoothing"}, "learner");
            c.learner.members = take<std::size_t>(l, "members", c.learner.members);
            c.learner.max_depth = take<int>(l, "max_depth", c.learner.max_depth);
            c.learner.subsample = take<double>(l, "subsample", c.learner.subsample);
            c.learner.min_samples_split = take<std::size_t>(l, "min_samples_split", c.learner.min_samples_split);
            c.learner.smoothing = take<double>(l, "smoothing", c.learner.smoothing);
        }
        if (j.contains("ood")) {
            const auto& o = j.at("ood");
            reject_unknown(o, {"donor", "donor_schema", "shift_sigma"}, "ood");
            OodConfig ood;
            const auto donor = take<std::string>(o, "donor", "self");
            if (donor != "self") ood.donor = resolve(base_dir, donor);
            ood.donor_schema = resolve(base_dir, take<std::string>(o, "donor_schema", ""));
            ood.shift_sigma = take<double>(o, "shift_sigma", 0.0);
            c.ood = ood;
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed config: ") + e.what());
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    return parse_config(csv::read_text_file(path), path.parent_path());
}

std::string config_to_json(const ExperimentConfig& c) {
    ordered_json j;
    j["datasets"] = ordered_json::array();
    for (const auto& d : c.datasets) {
        ordered_json e;
        e["id"] = d.id;
        if (d.synthetic) {
            e["synthetic"] = {{"n", d.synthetic->n},
                              {"k", d.synthetic->k},
                              {"numeric", d.synthetic->numeric},
                              {"categorical", d.synthetic->categorical},
                              {"noise", d.synthetic->noise}};
            e["seed"] = d.synthetic_seed;
        } else {
            e["csv"] = d.csv.generic_string();
            e["schema"] = d.schema.generic_string();
        }
        j["datasets"].push_back(std::move(e));
    }
    j["predictions"] = c.predictions.generic_string();
    j["measures"] = ordered_json::array();
    for (auto m : c.measures) j["measures"].push_back(std::string(to_string(m)));
    j["metrics"] = ordered_json::array();
    for (auto m : c.metrics) j["metrics"].push_back(std::string(to_string(m)));
    j["seed"] = c.seed;
    j["folds"] = c.folds;
    j["stratified"] = c.stratified;
    j["log_base"] = c.log_base;
    j["learner"] = {{"members", c.learner.members},
                    {"max_depth", c.learner.max_depth},
                    {"subsample", c.learner.subsample},
                    {"min_samples_split", c.learner.min_samples_split},
                    {"smoothing", c.learner.smoothing}};
    if (c.ood) {
        j["ood"] = {{"donor", c.ood->donor.empty() ? std::string("self") : c.ood->donor.generic_string()},
                    {"donor_schema", c.ood->donor_schema.generic_string()},
                    {"shift_sigma", c.ood->shift_sigma}};
    }
    return j.dump(2) + "\n";
}

std::string config_hash(const ExperimentConfig& config) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : config_to_json(config)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

// keeps the exception type so callers can still map it to an exit code
[[noreturn]] void rethrow_with_context(const std::string& ctx) {
    try {
        throw;
    } catch (const SchemaError& e) {
        throw SchemaError(ctx + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(ctx + e.what());
    } catch (const IndexError& e) {
        throw IndexError(ctx + e.what());
    } catch (const DegenerateError& e) {
        throw DegenerateError(ctx + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(ctx + e.what());
    } catch (const std::exception& e) {
        throw std::runtime_error(ctx + e.what());
    }
}

Dataset materialize(const DatasetSource& src) {
    if (src.synthetic) return make_synthetic_ordinal(*src.synthetic, src.synthetic_seed, src.id);
    Dataset d = load_dataset(src.csv, load_schema(src.schema));
    d.id = src.id;
    return d;
}

void evaluate_unit(ExperimentRun& run, const ExperimentConfig& config) {
    run.point = point_metrics(run.records);
    run.prob = prob_metrics(run.records);
    for (auto metric : config.metrics) {
        const auto errors = instance_errors(run.records, metric);
        for (auto measure : config.measures) {
            for (auto kind : kAllUncertaintyKinds) {
                PrrCell cell{measure, kind, metric, std::nullopt};
                try {
                    cell.result = prr(errors, instance_scores(run.records, {measure, kind}));
                } catch (const DegenerateError&) {
                }
                run.prrs.push_back(cell);
            }
        }
    }
}

std::vector<ExperimentRun> run_dataset(const DatasetSource& src, const ExperimentConfig& config,
                                       const std::string& hash, const Dataset* shared_donor) {
    const Dataset data = materialize(src);
    const auto split_seed = derive_seed(config.seed, data.id, ~std::uint64_t{0});
    std::vector<std::size_t> folds;
    try {
        folds = config.stratified ? stratified_kfold_split(data.labels, config.folds, split_seed)
                                  : kfold_split(data.size(), config.folds, split_seed);
    } catch (...) {
        rethrow_with_context("dataset '" + data.id + "': ");
    }

    std::optional<Dataset> own_donor;
    const Dataset* donor = shared_donor;
    if (config.ood && config.ood->donor.empty()) {
        own_donor = config.ood->shift_sigma != 0.0 ? shift_numeric(data, config.ood->shift_sigma) : data;
        donor = &*own_donor;
    }

    std::vector<ExperimentRun> runs;
    for (std::size_t fold = 0; fold < config.folds; ++fold) {
        ExperimentRun run;
        run.dataset_id = data.id;
        run.fold = fold;
        run.seed = derive_seed(config.seed, data.id, fold);
        run.config_hash = hash;
        try {
            const auto train_rows = fold_members(folds, fold, false);
            const auto test_rows = fold_members(folds, fold, true);
            const Dataset train = data.subset(train_rows);
            const Dataset test = data.subset(test_rows);
            const auto prep = Preprocessor::fit(train);
            const auto x_train = prep.transform(train);
            const auto x_test = prep.transform(test);
            const auto model = train_bootstrap_ensemble(x_train, train.labels, data.k_count, run.seed, config.learner);
            run.warnings = model.warnings();

            const auto predictions = model.predict(x_test);
            for (std::size_t i = 0; i < predictions.size(); ++i) {
                run.records.push_back(make_record(std::to_string(test_rows[i]), predictions[i], test.labels[i],
                                                  config.measures, config.log_base));
            }
            evaluate_unit(run, config);

            if (donor) {
                const auto x_ood = synthesize_ood(prep, *donor, test.size(), derive_seed(run.seed, "ood", 0));
                const auto ood_predictions = model.predict(x_ood);
                std::vector<int> labels(test.size(), 0);
                labels.resize(test.size() + ood_predictions.size(), 1);
                for (auto measure : config.measures) {
                    for (auto kind : kAllUncertaintyKinds) {
                        std::vector<double> scores;
                        scores.reserve(labels.size());
                        for (const auto& r : run.records) scores.push_back(r.triple(measure).get(kind));
                        for (const auto& e : ood_predictions) {
                            scores.push_back(compute_uncertainty(e, measure, config.log_base).get(kind));
                        }
                        run.ood_auc.push_back({measure, kind, auc_roc(scores, labels)});
                    }
                }
            }
        } catch (const std::exception&) {
            rethrow_with_context("dataset '" + data.id + "', fold " + std::to_string(fold) + ": ");
        }
        runs.push_back(std::move(run));
    }
    return runs;
}

} // namespace

std::vector<ExperimentRun> run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto hash = config_hash(config);
    std::vector<ExperimentRun> runs;

    if (!config.predictions.empty()) {
        ExperimentRun run;
        run.dataset_id = config.predictions.stem().string();
        run.seed = config.seed;
        run.config_hash = hash;
        run.records = import_predictions(config.predictions, config.measures, config.log_base);
        if (run.records.size() < 2) throw ValidationError("imported predictions need at least two instances");
        evaluate_unit(run, config);
        runs.push_back(std::move(run));
        return runs;
    }

    std::optional<Dataset> donor;
    if (config.ood && !config.ood->donor.empty()) {
        if (!std::filesystem::exists(config.ood->donor)) {
            throw SchemaError("OOD donor file not found: " + config.ood->donor.string());
        }
        DatasetSchema schema;
        if (!config.ood->donor_schema.empty()) {
            schema = load_schema(config.ood->donor_schema);
        } else {
            throw ValidationError("OOD donor needs a donor_schema");
        }
        donor = load_dataset(config.ood->donor, schema);
        if (config.ood->shift_sigma != 0.0) donor = shift_numeric(*donor, config.ood->shift_sigma);
    }

    for (const auto& src : config.datasets) {
        auto unit_runs = run_dataset(src, config, hash, donor ? &*donor : nullptr);
        for (auto& r : unit_runs) runs.push_back(std::move(r));
    }
    return runs;
}

std::vector<PredictionRecord> pooled_records(std::span<const ExperimentRun> runs, std::string_view dataset_id) {
    std::vector<PredictionRecord> out;
    for (const auto& run : runs) {
        if (run.dataset_id != dataset_id) continue;
        out.insert(out.end(), run.records.begin(), run.records.end());
    }
    return out;
}

std::string run_to_json(const ExperimentRun& run, std::string_view timestamp) {
    ordered_json j;
    j["dataset"] = run.dataset_id;
    j["fold"] = run.fold;
    j["seed"] = run.seed;
    j["config_hash"] = run.config_hash;
    j["timestamp"] = std::string(timestamp);
    j["warnings"] = run.warnings;
    j["point_metrics"] = {{"mcr", run.point.mcr},
                          {"mae", run.point.mae},
                          {"mse", run.point.mse},
                          {"qwk", run.point.qwk},
                          {"qwk_degenerate", run.point.qwk_degenerate},
                          {"one_off", run.point.one_off}};
    j["prob_metrics"] = {{"nll", run.prob.nll},
                         {"brier", run.prob.brier},
                         {"rps", run.prob.rps},
                         {"ece", run.prob.ece},
                         {"nll_clamped", run.prob.nll_clamped}};
    j["prr"] = ordered_json::array();
    for (const auto& cell : run.prrs) {
        ordered_json e{{"measure", to_string(cell.measure)}, {"kind", to_string(cell.kind)},
                       {"metric", to_string(cell.metric)}};
        if (cell.result) {
            e["ar_unc"] = cell.result->ar_unc;
            e["ar_orc"] = cell.result->ar_orc;
            e["prr"] = cell.result->prr;
        } else {
            e["prr"] = nullptr;
        }
        j["prr"].push_back(std::move(e));
    }
    j["ood_auc"] = ordered_json::array();
    for (const auto& cell : run.ood_auc) {
        j["ood_auc"].push_back({{"measure", to_string(cell.measure)}, {"kind", to_string(cell.kind)}, {"auc", cell.auc}});
    }
    j["records"] = ordered_json::array();
    for (const auto& r : run.records) {
        ordered_json e;
        e["instance_id"] = r.instance_id;
        e["true_label"] = r.true_label;
        e["members"] = ordered_json::array();
        for (const auto& m : r.members.members()) e["members"].push_back(std::vector<double>(m.values().begin(), m.values().end()));
        e["uncertainty"] = ordered_json::object();
        for (const auto& [measure, t] : r.uncertainty) {
            e["uncertainty"][std::string(to_string(measure))] = {{"tu", t.tu}, {"au", t.au}, {"eu", t.eu}};
        }
        j["records"].push_back(std::move(e));
    }
    return j.dump(1) + "\n";
}

std::string summary_csv(std::span<const ExperimentRun> runs) {
    std::string out = "dataset,fold,measure,kind,metric,value\n";
    for (const auto& run : runs) {
        const auto prefix = csv::escape(run.dataset_id) + ',' + std::to_string(run.fold) + ',';
        for (const auto& cell : run.prrs) {
            if (!cell.result) continue;
            out += prefix + std::string(to_string(cell.measure)) + ',' + std::string(to_string(cell.kind)) + ',' +
                   std::string(to_string(cell.metric)) + ',' + csv::format_double(cell.result->prr) + '\n';
        }
        for (const auto& cell : run.ood_auc) {
            out += prefix + std::string(to_string(cell.measure)) + ',' + std::string(to_string(cell.kind)) +
                   ",ood-auc," + csv::format_double(cell.auc) + '\n';
        }
    }
    return out;
}

void write_results(std::span<const ExperimentRun> runs, const std::filesystem::path& out_dir,
                   std::string_view timestamp) {
    for (const auto& run : runs) {
        csv::write_text_file(out_dir / "runs" / run.dataset_id / (std::to_string(run.fold) + ".json"),
                             run_to_json(run, timestamp));
    }
    csv::write_text_file(out_dir / "summary.csv", summary_csv(runs));
}

} // namespace ouq
