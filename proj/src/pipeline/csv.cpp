#include "ouq/pipeline/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ouq/error.hpp"

namespace ouq::csv {

std::vector<Row> parse(std::string_view text) {
    std::vector<Row> rows;
    Row row{{}, 1};
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;
    std::size_t quote_line = 0;

    auto end_field = [&] {
        row.fields.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        const bool blank = row.fields.size() == 1 && row.fields.front().empty();
        if (!blank) rows.push_back(std::move(row));
        row = Row{{}, line + 1};
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (field_started || !field.empty()) throw SchemaError("stray quote inside field", line);
            in_quotes = true;
            field_started = true;
            quote_line = line;
            break;
        case ',': end_field(); break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') break;
            [[fallthrough]];
        case '\n':
            end_field();
            end_row();
            ++line;
            break;
        default: field.push_back(c); field_started = true;
        }
    }
    if (in_quotes) throw SchemaError("unterminated quoted field", quote_line);
    if (field_started || !field.empty() || !row.fields.empty()) {
        end_field();
        end_row();
    }
    return rows;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

} // namespace

double parse_double(std::string_view field, std::size_t line, std::string_view what) {
    const auto s = trim(field);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw SchemaError("cannot parse " + std::string(what) + " value '" + std::string(field) + "'", line);
    }
    return v;
}

long long parse_integer(std::string_view field, std::size_t line, std::string_view what) {
    const auto s = trim(field);
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw SchemaError("cannot parse " + std::string(what) + " integer '" + std::string(field) + "'", line);
    }
    return v;
}

} // namespace ouq::csv
