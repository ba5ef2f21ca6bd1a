#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ouq {

enum class ColumnKind { Numeric, Categorical };

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::Numeric;
    std::vector<double> numeric;           // when kind == Numeric
    std::vector<std::string> categorical;  // when kind == Categorical
};

/// Tabular data with ordinal labels encoded 1..k_count.
struct Dataset {
    std::string id;
    std::vector<Column> columns;
    std::vector<int> labels;
    int k_count = 0;
    std::vector<std::string> label_names;  // empty when labels were integers

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t feature_count() const noexcept { return columns.size(); }
    std::size_t numeric_count() const noexcept;

    Dataset subset(std::span<const std::size_t> rows) const;
    /// Throws ValidationError on ragged columns or labels outside 1..k_count.
    void validate() const;
};

/// Loading contract for a CSV file.
///   label:        name of the label column (required)
///   label_order:  ordered label values mapped to 1..K; when absent the
///                 labels must be integers in 1..K
///   k:            declared K for integer labels (defaults to the largest label)
///   categorical:  columns read as categories; all others are numeric
///   ignore:       columns dropped on load
struct DatasetSchema {
    std::string label_column;
    std::vector<std::string> label_order;
    int k_count = 0;
    std::vector<std::string> categorical;
    std::vector<std::string> ignore;
};

DatasetSchema parse_schema(std::string_view json_text);
DatasetSchema load_schema(const std::filesystem::path& path);
std::string schema_to_json(const DatasetSchema& schema);

Dataset parse_dataset(std::string_view csv_text, const DatasetSchema& schema, std::string id);
Dataset load_dataset(const std::filesystem::path& csv_path, const DatasetSchema& schema);

/// CSV with the feature columns followed by the label column `label`.
std::string dataset_to_csv(const Dataset& d);

} // namespace ouq
