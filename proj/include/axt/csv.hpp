#pragma once

#include <string>
#include <vector>

namespace axt {

using CsvRow = std::vector<std::string>;

// Quotes a field when it holds a comma, quote or newline.
std::string csv_escape(const std::string& field);
std::string csv_line(const CsvRow& row);

// First row is the header. Throws SyntaxError on unterminated quotes.
std::vector<CsvRow> parse_csv(const std::string& text);
std::vector<CsvRow> read_csv_file(const std::string& path);
void write_csv_file(const std::string& path, const std::vector<CsvRow>& rows);

// Locale-independent fixed formatting used in every report.
std::string fmt_num(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace axt
