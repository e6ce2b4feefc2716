#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rigidity {

/// Header plus rows of raw cell text. Cells holding a comma, quote or newline
/// are quoted on output with quotes doubled; everything else is written
/// verbatim, so parse(emit(t)) == t and emit(parse(s)) == s for emitted s.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column, or -1.
  int column(const std::string& name) const;
  const std::string& cell(std::size_t row, const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

std::string emit_csv(const CsvTable& table);
/// Throws FormatError on unterminated quotes or ragged rows.
CsvTable parse_csv(const std::string& text);

CsvTable read_csv_file(const std::string& path);
void write_csv_file(const std::string& path, const CsvTable& table);

/// Shortest decimal that round-trips (%.17g if nothing shorter); "nan", "inf", "-inf".
std::string format_number(double x);
/// Inverse of format_number; throws FormatError on junk.
double parse_number(const std::string& text);

}  // namespace rigidity
