#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace mmw::io {

/// Writes to a sibling temp file then renames it over `path`.
/// Throws std::runtime_error on failure.
void atomic_write(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

/// Shortest decimal that round-trips the double ("%.17g"-style, locale-free).
std::string format_double(double v);

}  // namespace mmw::io
