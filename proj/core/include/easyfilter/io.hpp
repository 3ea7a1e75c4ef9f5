#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace easyfilter {

/// Throws ArchiveError when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temporary and rename so readers never see a partial file.
void write_file(const std::filesystem::path& path, std::string_view contents);

// Tabular outputs start with "#easyfilter\t<kind>\tv1\tconfig=<hash>".
std::string table_header(std::string_view kind, std::string_view config_hash);

// Splits a table into data rows after checking the header line. An empty
// expected hash accepts any configuration. Throws DataError on a wrong kind or
// version and on a hash mismatch.
std::vector<std::vector<std::string>> read_table(const std::filesystem::path& path, std::string_view kind,
                                                 std::string_view expected_hash);

}  // namespace easyfilter
