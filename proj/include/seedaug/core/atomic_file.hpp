#pragma once

#include <filesystem>
#include <string_view>

namespace seedaug {

// Writes to a sibling temp file, fsyncs, then renames over `path`, so
// readers never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace seedaug
