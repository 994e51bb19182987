#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace factjudge::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: comma separated, double-quoted fields may hold commas,
// newlines and "" escapes. CRLF and LF line endings are both accepted.
// Throws std::runtime_error on an unterminated quoted field.
std::vector<Row> parse(std::string_view text);

// Quotes a field when it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);

std::string format_row(const Row& row);

}  // namespace factjudge::csv
