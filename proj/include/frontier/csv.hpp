#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace frontier::csv {

/// One parsed line with its 1-based line number in the source text.
struct Row {
    std::size_t line = 0;
    std::vector<std::string> cells;
};

/// Splits comma-separated text into rows. Supports double-quoted cells with
/// "" escapes; strips a UTF-8 BOM and trailing CR; skips blank lines.
/// Quoted cells may not span lines.
std::vector<Row> parse(std::string_view text);

/// Quotes a cell when it contains a comma, quote or leading/trailing space.
std::string escape(std::string_view cell);

/// Joins escaped cells with commas and appends '\n'.
std::string join(const std::vector<std::string>& cells);

/// Shortest "%.12g" rendering of a real.
std::string format_real(double value);

/// Strict parse of a whole cell as a finite double; false on any junk.
bool parse_real(std::string_view text, double& out);
bool parse_int(std::string_view text, long long& out);

}  // namespace frontier::csv
