#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcalloc::csv {

/// One logical line of a CSV document together with its 1-based line number.
struct Line {
  std::size_t number = 0;
  std::string text;
};

/// Splits a document on '\n'. A trailing '\r' is dropped; blank lines are skipped.
std::vector<Line> split_lines(std::string_view document);

/// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
/// Throws Error(kMalformedInput) on an unterminated quote.
std::vector<std::string> split_fields(const Line& line);

/// Quotes a field when it contains a comma, quote, or leading/trailing space.
std::string quote(std::string_view field);

std::string join(const std::vector<std::string>& fields, char sep = ',');

/// Shortest text that parses back to the same double.
std::string format_real(double value);

/// Fixed-point rendering with `decimals` digits after the point.
std::string format_fixed(double value, int decimals);

/// Rounds to `decimals` places for display; negative `decimals` returns `value` unchanged.
double round_display(double value, int decimals);

std::optional<long long> parse_integer(std::string_view text);
std::optional<double> parse_real(std::string_view text);

}  // namespace pcalloc::csv
