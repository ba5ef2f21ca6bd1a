#include "ouq/pipeline/dataset.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"
#include "ouq/error.hpp"
#include "ouq/pipeline/csv.hpp"

namespace ouq {

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

} // namespace

std::size_t Dataset::numeric_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(columns.begin(), columns.end(),
                                                  [](const Column& c) { return c.kind == ColumnKind::Numeric; }));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.id = id;
    out.k_count = k_count;
    out.label_names = label_names;
    out.labels.reserve(rows.size());
    for (auto r : rows) out.labels.push_back(labels.at(r));
    for (const auto& c : columns) {
        Column col{c.name, c.kind, {}, {}};
        if (c.kind == ColumnKind::Numeric) {
            col.numeric.reserve(rows.size());
            for (auto r : rows) col.numeric.push_back(c.numeric.at(r));
        } else {
            col.categorical.reserve(rows.size());
            for (auto r : rows) col.categorical.push_back(c.categorical.at(r));
        }
        out.columns.push_back(std::move(col));
    }
    return out;
}

void Dataset::validate() const {
    if (k_count < 2) throw ValidationError("dataset " + id + ": K must be >= 2");
    for (int y : labels) {
        if (y < 1 || y > k_count) {
            throw ValidationError("dataset " + id + ": label " + std::to_string(y) + " outside 1.." +
                                  std::to_string(k_count));
        }
    }
    for (const auto& c : columns) {
        const auto n = c.kind == ColumnKind::Numeric ? c.numeric.size() : c.categorical.size();
        if (n != labels.size()) throw ValidationError("dataset " + id + ": column " + c.name + " is ragged");
    }
}

DatasetSchema parse_schema(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("schema is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("schema must be a JSON object");
    DatasetSchema s;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "label") s.label_column = value.get<std::string>();
            else if (key == "label_order") s.label_order = value.get<std::vector<std::string>>();
            else if (key == "k") s.k_count = value.get<int>();
            else if (key == "categorical") s.categorical = value.get<std::vector<std::string>>();
            else if (key == "ignore") s.ignore = value.get<std::vector<std::string>>();
            else throw SchemaError("unknown schema key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("malformed schema: ") + e.what());
    }
    if (s.label_column.empty()) throw SchemaError("schema must name the label column");
    if (!s.label_order.empty()) {
        const std::set<std::string> unique(s.label_order.begin(), s.label_order.end());
        if (unique.size() != s.label_order.size()) throw SchemaError("label_order contains duplicates");
        if (s.k_count != 0 && s.k_count != static_cast<int>(s.label_order.size())) {
            throw SchemaError("k disagrees with label_order length");
        }
    }
    return s;
}

DatasetSchema load_schema(const std::filesystem::path& path) {
    return parse_schema(csv::read_text_file(path));
}

std::string schema_to_json(const DatasetSchema& s) {
    nlohmann::ordered_json j;
    j["label"] = s.label_column;
    if (!s.label_order.empty()) j["label_order"] = s.label_order;
    if (s.k_count != 0) j["k"] = s.k_count;
    if (!s.categorical.empty()) j["categorical"] = s.categorical;
    if (!s.ignore.empty()) j["ignore"] = s.ignore;
    return j.dump(2) + "\n";
}

Dataset parse_dataset(std::string_view csv_text, const DatasetSchema& schema, std::string id) {
    const auto rows = csv::parse(csv_text);
    if (rows.empty()) throw SchemaError("dataset " + id + " is empty");
    const auto& header = rows.front().fields;
    {
        std::set<std::string> seen;
        for (const auto& name : header) {
            if (!seen.insert(name).second) throw SchemaError("duplicate header name '" + name + "'", 1);
        }
    }
    for (const auto& name : schema.categorical) {
        if (!contains(header, name)) throw SchemaError("categorical column '" + name + "' not in header", 1);
    }
    const auto label_it = std::find(header.begin(), header.end(), schema.label_column);
    if (label_it == header.end()) {
        throw SchemaError("label column '" + schema.label_column + "' not in header", 1);
    }
    const auto label_idx = static_cast<std::size_t>(label_it - header.begin());

    Dataset d;
    d.id = std::move(id);
    std::vector<std::size_t> feature_idx;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c == label_idx || contains(schema.ignore, header[c])) continue;
        feature_idx.push_back(c);
        d.columns.push_back({header[c],
                             contains(schema.categorical, header[c]) ? ColumnKind::Categorical : ColumnKind::Numeric,
                             {}, {}});
    }

    int max_label = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.size()) {
            throw SchemaError("expected " + std::to_string(header.size()) + " fields, got " +
                                  std::to_string(row.fields.size()),
                              row.line);
        }
        const auto& raw_label = row.fields[label_idx];
        if (raw_label.empty()) throw SchemaError("missing label", row.line);
        int label = 0;
        if (!schema.label_order.empty()) {
            const auto it = std::find(schema.label_order.begin(), schema.label_order.end(), raw_label);
            if (it == schema.label_order.end()) {
                throw SchemaError("label '" + raw_label + "' not in declared label_order", row.line);
            }
            label = static_cast<int>(it - schema.label_order.begin()) + 1;
        } else {
            const auto v = csv::parse_integer(raw_label, row.line, "label");
            if (v < 1 || v > 1'000'000) throw SchemaError("integer labels must be >= 1", row.line);
            label = static_cast<int>(v);
        }
        max_label = std::max(max_label, label);
        d.labels.push_back(label);

        for (std::size_t f = 0; f < feature_idx.size(); ++f) {
            const auto& cell = row.fields[feature_idx[f]];
            auto& col = d.columns[f];
            if (col.kind == ColumnKind::Numeric) {
                col.numeric.push_back(csv::parse_double(cell, row.line, "column '" + col.name + "'"));
            } else {
                if (cell.empty()) throw SchemaError("missing category in column '" + col.name + "'", row.line);
                col.categorical.push_back(cell);
            }
        }
    }

    if (!schema.label_order.empty()) {
        d.k_count = static_cast<int>(schema.label_order.size());
        d.label_names = schema.label_order;
    } else if (schema.k_count != 0) {
        if (max_label > schema.k_count) {
            throw SchemaError("label " + std::to_string(max_label) + " exceeds declared k " +
                              std::to_string(schema.k_count));
        }
        d.k_count = schema.k_count;
    } else {
        d.k_count = max_label;
    }
    if (d.k_count < 2) throw SchemaError("dataset " + d.id + " needs at least 2 classes, found K=" +
                                         std::to_string(d.k_count));
    if (d.labels.empty()) throw SchemaError("dataset " + d.id + " has no rows");
    d.validate();
    return d;
}

Dataset load_dataset(const std::filesystem::path& csv_path, const DatasetSchema& schema) {
    return parse_dataset(csv::read_text_file(csv_path), schema, csv_path.stem().string());
}

std::string dataset_to_csv(const Dataset& d) {
    std::string out;
    for (const auto& c : d.columns) out += csv::escape(c.name) + ",";
    out += "label\n";
    for (std::size_t r = 0; r < d.size(); ++r) {
        for (const auto& c : d.columns) {
            out += c.kind == ColumnKind::Numeric ? csv::format_double(c.numeric[r]) : csv::escape(c.categorical[r]);
            out += ',';
        }
        out += d.label_names.empty() ? std::to_string(d.labels[r])
                                     : csv::escape(d.label_names[static_cast<std::size_t>(d.labels[r] - 1)]);
        out += '\n';
    }
    return out;
}

} // namespace ouq
