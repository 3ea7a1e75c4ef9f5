#include "easyfilter/io.hpp"

#include <fstream>
#include <sstream>

#include "easyfilter/errors.hpp"
#include "easyfilter/text.hpp"

namespace easyfilter {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArchiveError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ArchiveError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw ArchiveError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw ArchiveError("cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string table_header(std::string_view kind, std::string_view config_hash) {
  return "#easyfilter\t" + std::string(kind) + "\tv1\tconfig=" + std::string(config_hash) + "\n";
}

std::vector<std::vector<std::string>> read_table(const fs::path& path, std::string_view kind,
                                                 std::string_view expected_hash) {
  const std::string text = read_file(path);
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  const auto head = split(line, '\t');
  if (head.size() != 4 || head[0] != "#easyfilter" || head[1] != kind || head[2] != "v1" ||
      !head[3].starts_with("config=")) {
    throw DataError(path.string() + ": not a v1 '" + std::string(kind) + "' table");
  }
  const auto hash = head[3].substr(7);
  if (!expected_hash.empty() && hash != expected_hash) {
    throw DataError(path.string() + " was written under config " + std::string(hash) + ", expected " +
                    std::string(expected_hash));
  }
  bool column_row = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (column_row) {  // column names
      column_row = false;
      continue;
    }
    std::vector<std::string> row;
    for (auto f : split(line, '\t')) row.emplace_back(f);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace easyfilter
