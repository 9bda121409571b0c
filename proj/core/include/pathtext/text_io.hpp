#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pathtext {

/// True when `bytes` is well-formed UTF-8 (no overlongs, surrogates, or
/// code points above U+10FFFF).
bool is_valid_utf8(std::string_view bytes);

/// Reads a whole file. Throws IngestionError naming the path when the file is
/// missing or unreadable, or when `require_utf8` is set and the bytes are not
/// valid UTF-8.
std::string read_text_file(const std::filesystem::path& path, bool require_utf8 = true);

/// Writes `contents` to a sibling temporary file and renames it over `path`.
/// Parent directories are created as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Splits text into lines, accepting both "\n" and "\r\n"; a trailing newline
/// does not produce an empty final line.
std::vector<std::string> split_lines(std::string_view text);

/// Splits on runs of ASCII whitespace.
std::vector<std::string> split_whitespace(std::string_view text);

/// Shortest decimal representation that parses back to the same double.
std::string format_double_exact(double value);

/// Parses a full-string double; throws FormatError on trailing garbage.
double parse_double(std::string_view text);

/// Parses a full-string unsigned integer; throws FormatError on failure.
std::size_t parse_size(std::string_view text);

}  // namespace pathtext
