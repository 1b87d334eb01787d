#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sparsetag {

/// Error raised by every file reader; carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  explicit ParseError(const std::string& what);

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_ = 0;
};

std::vector<std::string_view> split_whitespace(std::string_view s);
std::vector<std::string_view> split_on(std::string_view s, char sep);
std::string_view trim(std::string_view s);

bool parse_double(std::string_view s, double& out);
bool parse_long(std::string_view s, long& out);

/// Shortest decimal form that parses back to the same double.
std::string format_exact(double v);
/// printf-style "%.{digits}g".
std::string format_sig(double v, int digits);

std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Writes to a sibling temp file, then renames over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

// UTF-8 helpers. Invalid sequences are treated byte-wise.
std::vector<std::string_view> utf8_codepoints(std::string_view s);
std::string ascii_lower(std::string_view s);
/// Replaces whitespace bytes so the result can be used as a single field.
std::string sanitize_field(std::string_view s);

}  // namespace sparsetag
