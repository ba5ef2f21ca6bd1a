#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ouq::csv {

struct Row {
    std::vector<std::string> fields;
    std::size_t line;  // 1-based line of the row's first character
};

/// RFC 4180-style parsing: quoted fields, doubled quotes, CRLF. Blank lines
/// are skipped. Throws SchemaError on an unterminated quote.
std::vector<Row> parse(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);

/// Writes via a sibling temporary and rename, so readers never observe a
/// partially written file.
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Quotes a field if it contains a delimiter, quote or newline.
std::string escape(std::string_view field);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Strict parse of the whole field; throws SchemaError mentioning `what`.
double parse_double(std::string_view field, std::size_t line, std::string_view what);
long long parse_integer(std::string_view field, std::size_t line, std::string_view what);

} // namespace ouq::csv
