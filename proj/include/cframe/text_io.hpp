#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cframe {

std::vector<std::string_view> split_fields(std::string_view line, char sep);
std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);

// Writes every line of header prefixed with `prefix` (e.g. "# " or "// ").
void write_comment_header(std::ostream& out, std::string_view header, std::string_view prefix = "# ");

// Throws InputError when the file cannot be opened.
std::ifstream open_input(const std::filesystem::path& path);
std::ofstream open_output(const std::filesystem::path& path);

// "%.17g": round-trips every double.
std::string format_double(double v);

}  // namespace cframe
