#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace dreams::io {

/// Writes `contents` to a temporary sibling, fsyncs it, renames it over
/// `path` and fsyncs the directory. Readers see the old file or the new one,
/// never a mix. Throws Error(io_error); the original file is untouched on
/// failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Throws Error(io_error) if the file cannot be read.
std::string read_file(const std::filesystem::path& path);

/// Temporary files left behind by an interrupted write_file_atomic.
bool is_temporary(const std::filesystem::path& path);

}  // namespace dreams::io
