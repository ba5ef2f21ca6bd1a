#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ouq/eval/metrics.hpp"
#include "ouq/eval/rejection.hpp"
#include "ouq/pipeline/dataset.hpp"
#include "ouq/pipeline/synthetic.hpp"
#include "ouq/pipeline/tree_ensemble.hpp"

namespace ouq {

struct DatasetSource {
    std::string id;
    std::filesystem::path csv;
    std::filesystem::path schema;
    std::optional<SyntheticConfig> synthetic;
    std::uint64_t synthetic_seed = 0;
};

struct OodConfig {
    /// Donor table; empty means the in-distribution dataset itself.
    std::filesystem::path donor;
    std::filesystem::path donor_schema;
    double shift_sigma = 0.0;
};

/// Everything needed to reproduce a run. Either `datasets` (built-in
/// learner under k-fold cross-validation) or `predictions` (externally
/// produced member probabilities, evaluated as a single unit) is set.
struct ExperimentConfig {
    std::vector<DatasetSource> datasets;
    std::filesystem::path predictions;
    std::vector<MeasureKind> measures{kAllMeasures.begin(), kAllMeasures.end()};
    std::vector<ErrorMetric> metrics{ErrorMetric::Mcr, ErrorMetric::Mae};
    std::uint64_t seed = 0;
    std::size_t folds = 10;
    bool stratified = false;
    double log_base = kDefaultLogBase;
    LearnerConfig learner;
    std::optional<OodConfig> ood;

    void validate() const;
};

/// Parses the JSON run configuration; relative paths resolve against
/// `base_dir`.
ExperimentConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical JSON form (also the input of config_hash).
std::string config_to_json(const ExperimentConfig& config);
/// 16 hex digits of FNV-1a over the canonical JSON.
std::string config_hash(const ExperimentConfig& config);

struct PrrCell {
    MeasureKind measure;
    UncertaintyKind kind;
    ErrorMetric metric;
    std::optional<PrrResult> result;  // empty when the fold makes no usable errors
};

struct AucCell {
    MeasureKind measure;
    UncertaintyKind kind;
    double auc;
};

/// One (dataset, fold) unit.
struct ExperimentRun {
    std::string dataset_id;
    std::size_t fold = 0;
    std::uint64_t seed = 0;  // stream seed of this unit
    std::string config_hash;
    std::vector<PredictionRecord> records;
    PointMetrics point;
    ProbMetrics prob;
    std::vector<PrrCell> prrs;
    std::vector<AucCell> ood_auc;
    std::vector<std::string> warnings;
};

/// Runs every (dataset, fold) unit. Errors are rethrown with the unit's
/// context prefixed.
std::vector<ExperimentRun> run_experiment(const ExperimentConfig& config);

/// All records of `dataset_id` across folds, in fold order.
std::vector<PredictionRecord> pooled_records(std::span<const ExperimentRun> runs, std::string_view dataset_id);

std::string run_to_json(const ExperimentRun& run, std::string_view timestamp);

/// Flat table `dataset,fold,measure,kind,metric,value`; metric is the error
/// metric for PRR rows and `ood-auc` for OOD rows.
std::string summary_csv(std::span<const ExperimentRun> runs);

/// Writes runs/<dataset>/<fold>.json and summary.csv below `out_dir`.
void write_results(std::span<const ExperimentRun> runs, const std::filesystem::path& out_dir,
                   std::string_view timestamp);

} // namespace ouq
