#include "ouq/pipeline/interchange.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json.hpp"
#include "ouq/error.hpp"
#include "ouq/pipeline/csv.hpp"

namespace ouq {

namespace {

struct RawRow {
    std::string instance_id;
    long long member_id;
    long long true_label;
    std::vector<double> probs;
    std::size_t line;  // line (CSV) or 1-based element index (JSON)
};

std::vector<PredictionRecord> assemble(std::vector<RawRow> rows, std::span<const MeasureKind> measures,
                                       double log_base) {
    if (rows.empty()) throw SchemaError("prediction file has no rows");
    const std::size_t k = rows.front().probs.size();
    if (k < 2) throw SchemaError("prediction rows need at least 2 probability columns");

    std::vector<std::string> order;
    std::map<std::string, std::vector<const RawRow*>> groups;
    for (const auto& row : rows) {
        if (row.probs.size() != k) {
            throw SchemaError("row has " + std::to_string(row.probs.size()) + " probabilities, expected " +
                                  std::to_string(k),
                              row.line);
        }
        auto [it, inserted] = groups.try_emplace(row.instance_id);
        if (inserted) order.push_back(row.instance_id);
        it->second.push_back(&row);
    }

    const std::size_t m = groups.at(order.front()).size();
    std::vector<PredictionRecord> records;
    records.reserve(order.size());
    for (const auto& id : order) {
        auto& group = groups.at(id);
        if (group.size() != m) {
            throw SchemaError("instance '" + id + "' has " + std::to_string(group.size()) + " members, expected " +
                                  std::to_string(m),
                              group.front()->line);
        }
        std::stable_sort(group.begin(), group.end(),
                         [](const RawRow* a, const RawRow* b) { return a->member_id < b->member_id; });
        std::vector<ProbabilityVector> members;
        members.reserve(m);
        for (std::size_t i = 0; i < group.size(); ++i) {
            const auto* row = group[i];
            if (i > 0 && group[i - 1]->member_id == row->member_id) {
                throw SchemaError("instance '" + id + "' repeats member " + std::to_string(row->member_id), row->line);
            }
            if (row->true_label != group.front()->true_label) {
                throw SchemaError("instance '" + id + "' has inconsistent true_label", row->line);
            }
            try {
                members.push_back(ProbabilityVector::renormalized(row->probs, kImportTolerance));
            } catch (const ValidationError& e) {
                throw SchemaError(e.what(), row->line);
            }
        }
        const auto label = group.front()->true_label;
        if (label < 1 || label > static_cast<long long>(k)) {
            throw SchemaError("true_label " + std::to_string(label) + " outside 1.." + std::to_string(k),
                              group.front()->line);
        }
        records.push_back(make_record(id, EnsemblePrediction(std::move(members)), static_cast<int>(label), measures,
                                      log_base));
    }
    return records;
}

} // namespace

std::vector<PredictionRecord> parse_predictions_csv(std::string_view text, std::span<const MeasureKind> measures,
                                                    double log_base) {
    const auto rows = csv::parse(text);
    if (rows.empty()) throw SchemaError("prediction file is empty");
    const auto& header = rows.front().fields;
    if (header.size() < 5 || header[0] != "instance_id" || header[1] != "member_id" || header[2] != "true_label") {
        throw SchemaError("header must be instance_id,member_id,true_label,p_1,...,p_K", 1);
    }
    for (std::size_t c = 3; c < header.size(); ++c) {
        if (header[c] != "p_" + std::to_string(c - 2)) {
            throw SchemaError("expected column p_" + std::to_string(c - 2) + ", found '" + header[c] + "'", 1);
        }
    }
    std::vector<RawRow> raw;
    raw.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.fields.size() != header.size()) {
            throw SchemaError("expected " + std::to_string(header.size()) + " fields, got " +
                                  std::to_string(row.fields.size()),
                              row.line);
        }
        RawRow out{row.fields[0], csv::parse_integer(row.fields[1], row.line, "member_id"),
                   csv::parse_integer(row.fields[2], row.line, "true_label"), {}, row.line};
        for (std::size_t c = 3; c < row.fields.size(); ++c) {
            out.probs.push_back(csv::parse_double(row.fields[c], row.line, header[c]));
        }
        raw.push_back(std::move(out));
    }
    return assemble(std::move(raw), measures, log_base);
}

std::vector<PredictionRecord> parse_predictions_json(std::string_view text, std::span<const MeasureKind> measures,
                                                     double log_base) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("prediction file is not valid JSON: ") + e.what());
    }
    if (!j.is_array()) throw SchemaError("prediction JSON must be an array of row objects");
    std::vector<RawRow> raw;
    raw.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& obj = j[i];
        const std::size_t where = i + 1;
        try {
            RawRow row;
            row.line = where;
            const auto& id = obj.at("instance_id");
            row.instance_id = id.is_string() ? id.get<std::string>() : id.dump();
            row.member_id = obj.at("member_id").get<long long>();
            row.true_label = obj.at("true_label").get<long long>();
            for (std::size_t k = 1;; ++k) {
                const auto key = "p_" + std::to_string(k);
                if (!obj.contains(key)) break;
                row.probs.push_back(obj.at(key).get<double>());
            }
            if (obj.size() != 3 + row.probs.size()) throw SchemaError("unexpected keys in row object", where);
            raw.push_back(std::move(row));
        } catch (const nlohmann::json::exception& e) {
            throw SchemaError(std::string("malformed row object: ") + e.what(), where);
        }
    }
    return assemble(std::move(raw), measures, log_base);
}

std::vector<PredictionRecord> import_predictions(const std::filesystem::path& path,
                                                 std::span<const MeasureKind> measures, double log_base) {
    const auto text = csv::read_text_file(path);
    if (path.extension() == ".json") return parse_predictions_json(text, measures, log_base);
    return parse_predictions_csv(text, measures, log_base);
}

std::string export_predictions_csv(std::span<const PredictionRecord> records) {
    if (records.empty()) throw ValidationError("nothing to export");
    const int k = records.front().mean.k_count();
    std::string out = "instance_id,member_id,true_label";
    for (int i = 1; i <= k; ++i) out += ",p_" + std::to_string(i);
    out += '\n';
    for (const auto& r : records) {
        for (std::size_t m = 0; m < r.members.member_count(); ++m) {
            out += csv::escape(r.instance_id) + ',' + std::to_string(m) + ',' + std::to_string(r.true_label);
            for (double p : r.members.member(m).values()) out += ',' + csv::format_double(p);
            out += '\n';
        }
    }
    return out;
}

std::string export_predictions_json(std::span<const PredictionRecord> records) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        for (std::size_t m = 0; m < r.members.member_count(); ++m) {
            nlohmann::ordered_json row;
            row["instance_id"] = r.instance_id;
            row["member_id"] = m;
            row["true_label"] = r.true_label;
            const auto& p = r.members.member(m);
            for (std::size_t k = 0; k < p.size(); ++k) row["p_" + std::to_string(k + 1)] = p[k];
            rows.push_back(std::move(row));
        }
    }
    return rows.dump(1) + "\n";
}

} // namespace ouq
