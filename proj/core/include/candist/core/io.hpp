#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace candist::io {

/// Writes `contents` to a sibling temporary file and renames it over
/// `path`, so readers never observe a partial file.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_file(const std::filesystem::path& path);

/// Calls `fn(line, line_number)` for every non-blank line (1-based numbering).
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(const std::string&, std::size_t)>& fn);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace candist::io
