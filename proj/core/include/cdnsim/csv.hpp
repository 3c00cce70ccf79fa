#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cdnsim {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Minimal comma-separated reader: no quoting, fields trimmed, blank lines
/// and lines starting with '#' skipped. The first remaining line is the header.
CsvTable parse_csv(std::string_view text);

/// Shortest decimal form that round-trips to the same double. Output is
/// identical on every platform, which keeps result files byte-comparable.
std::string format_double(double v);

/// Joins fields with commas and a trailing newline.
std::string csv_line(const std::vector<std::string>& fields);

}  // namespace cdnsim
