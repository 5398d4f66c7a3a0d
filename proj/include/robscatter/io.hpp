#pragma once

#include <filesystem>
#include <string>

namespace robscatter {

/// Writes to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// "# robscatter <what> <UTC timestamp>\n"
std::string header_comment(const std::string& what);

std::string read_file(const std::filesystem::path& path);

}  // namespace robscatter
